mod common;

use dmcsched::generate::{generate_instance, GeneratorConfig};
use dmcsched::model::{received_energy, transfer_coefficient, DmcParams, Point};
use dmcsched::pipeline::{execute_detailed, OperationSchedule, ScheduleItem};
use dmcsched::routing::{
    atsp_greedy, atsp_lk, atsp_to_tsp_transform, expand_tour, metric_closure, DirectedCostGraph,
};
use dmcsched::model::segment_move_energy_time;
use proptest::prelude::*;

fn cost_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0f64..100.0, n), n).prop_map(|mut c| {
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficient_bounds(psi in 0.0f64..7.0, theta in 0.0f64..7.0, d in 0.0f64..40.0) {
        let dmc = DmcParams::default();
        let c = transfer_coefficient(psi, dmc.phi, theta, d, &dmc);
        prop_assert!(c >= 0.0 && c <= dmc.max_coefficient());
        if d > dmc.charge_distance {
            prop_assert_eq!(c, 0.0);
        }
    }

    #[test]
    fn received_energy_is_linear(
        c in prop::collection::vec(prop::collection::vec(0.0f64..0.4, 4), 3),
        t1 in prop::collection::vec(0.0f64..50.0, 3),
        t2 in prop::collection::vec(0.0f64..50.0, 3),
        a in 0.0f64..3.0,
    ) {
        let mix: Vec<f64> = t1.iter().zip(&t2).map(|(x, y)| a * x + y).collect();
        let r1 = received_energy(&c, &t1, 4.0).unwrap();
        let r2 = received_energy(&c, &t2, 4.0).unwrap();
        let rm = received_energy(&c, &mix, 4.0).unwrap();
        for j in 0..4 {
            prop_assert!((rm[j] - (a * r1[j] + r2[j])).abs() <= 1e-9 * (1.0 + rm[j].abs()));
        }
    }

    #[test]
    fn closure_is_idempotent_and_metric(c in cost_matrix(6)) {
        let g = DirectedCostGraph::new(c).unwrap();
        let cl = metric_closure(&g);
        prop_assert!(cl.satisfies_triangle_inequality());
        let twice = metric_closure(&cl);
        prop_assert_eq!(twice.costs(), cl.costs());
        for i in 0..6 {
            for j in 0..6 {
                prop_assert!(cl.cost(i, j) <= g.cost(i, j));
            }
        }
        let tour = atsp_lk(&cl, 1, 5);
        let exp = expand_tour(&tour, &cl);
        prop_assert!((g.path_cost(&exp.order) - tour.cost).abs() <= 1e-9 * (1.0 + tour.cost));
    }

    #[test]
    fn lk_never_worse_than_greedy(c in cost_matrix(8), seed in 0u64..1000) {
        let g = metric_closure(&DirectedCostGraph::new(c).unwrap());
        let lk = atsp_lk(&g, seed, 5);
        lk.validate(8).unwrap();
        prop_assert!(lk.cost <= atsp_greedy(&g).cost + 1e-9);
        prop_assert!((g.path_cost(&lk.order) - lk.cost).abs() < 1e-9);
    }

    #[test]
    fn transform_decodes_greedy_tours(c in cost_matrix(5)) {
        let g = DirectedCostGraph::new(c).unwrap();
        let t = atsp_to_tsp_transform(&g).unwrap();
        let sym = atsp_greedy(&t.graph);
        let d = t.decode(&sym, &g).unwrap();
        prop_assert!((t.reported_cost(&sym) - d.cost).abs() <= 1e-9 * (1.0 + t.big_m * 10.0));
    }

    #[test]
    fn conservation_on_random_schedules(seed in 0u64..10_000, steps in 0usize..12) {
        let inst = generate_instance(25, seed, &GeneratorConfig::default()).unwrap();
        let mut r = common::rng(seed);
        use rand::Rng;
        let mut items = Vec::new();
        let mut at = inst.bs_pos;
        for _ in 0..steps {
            let to = Point::new(r.gen_range(0.0..200.0), r.gen_range(0.0..200.0));
            let (_, dt) = segment_move_energy_time(at, to, &inst.asym, &inst.dmc);
            items.push(ScheduleItem::movement(to, dt));
            items.push(ScheduleItem::transmission(to, r.gen_range(0.0..std::f64::consts::TAU), r.gen_range(0.0..40.0)));
            at = to;
        }
        let (_, dt) = segment_move_energy_time(at, inst.bs_pos, &inst.asym, &inst.dmc);
        items.push(ScheduleItem::movement(inst.bs_pos, dt));
        let ex = execute_detailed(&inst, &OperationSchedule { items }).unwrap();
        let a = &ex.account;
        prop_assert!(common::rel_close(a.tb - a.tf, a.total_loss, 1e-9));
        prop_assert!(common::rel_close(a.f0, inst.dmc.e_b0 - a.mc_tran - a.mc_move, 1e-12));
        prop_assert!(ex.metrics.identity_error() < 1e-9);
    }
}
