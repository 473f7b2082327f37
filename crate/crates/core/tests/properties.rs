mod common;

use std::sync::Arc;

use proptest::prelude::*;

use common::{intersection_space, is_ql, Oracle, Space};
use qlnash_core::random::{self, global_game, individual_game, GlobalGameParams};
use qlnash_core::spec_file::{parse_spec_str, GameSpecFile};
use qlnash_core::{
    ElementSet, FiniteInfSemilattice, MinAggregate, ProductSemilattice, QuasiLeontief,
};

fn space(seed: u64, max: usize) -> Arc<FiniteInfSemilattice> {
    let mut r = random::rng(seed);
    if seed.is_multiple_of(3) {
        Arc::new(intersection_space(seed, 4, max))
    } else {
        Arc::new(random::semilattice(&mut r, max))
    }
}

fn subsets(n: usize) -> impl Iterator<Item = ElementSet> {
    (0u32..1 << n)
        .map(move |mask| ElementSet::new(n, (0..n).filter(|&e| mask & (1 << e) != 0)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_spaces_satisfy_the_axioms(seed in any::<u64>()) {
        let s = space(seed, 12);
        prop_assert!(s.check_axioms().is_valid());
        let o = Space::of(&s);
        for a in s.elements() {
            prop_assert!(s.leq(s.bottom(), a));
            for b in s.elements() {
                prop_assert_eq!(s.leq(a, b), o.leq(a, b));
                let m = s.meet(a, b);
                prop_assert!(s.leq(m, a) && s.leq(m, b));
                for c in s.elements() {
                    if s.leq(c, a) && s.leq(c, b) {
                        prop_assert!(s.leq(c, m));
                    }
                }
            }
        }
    }

    #[test]
    fn inf_convexity_readings_agree(seed in any::<u64>()) {
        let s = space(seed, 9);
        let o = Space::of(&s);
        for set in subsets(s.len()) {
            let c = s.is_inf_convex(&set);
            prop_assert_eq!(c.inf_convex, c.bracket_closed);
            prop_assert_eq!(c.inf_convex, c.sub_semilattice && c.order_convex);
            prop_assert_eq!(c.inf_convex, o.is_inf_convex(set.as_slice()));
        }
    }

    #[test]
    fn inf_convex_sets_are_closed_under_intersection(seed in any::<u64>(), a in any::<u32>(), b in any::<u32>()) {
        let s = space(seed, 10);
        let n = s.len();
        let pick = |mask: u32| ElementSet::new(n, (0..n).filter(|&e| mask & (1 << e) != 0)).unwrap();
        let close = |set: ElementSet| {
            // smallest bracket-closed superset
            let mut cur = set;
            loop {
                let mut next = cur.clone();
                for x in cur.iter() {
                    for y in cur.iter() {
                        next = next.union(&s.bracket(x, y).unwrap());
                    }
                }
                if next == cur {
                    return cur;
                }
                cur = next;
            }
        };
        let (x, y) = (close(pick(a)), close(pick(b)));
        prop_assert!(s.is_inf_convex(&x).inf_convex && s.is_inf_convex(&y).inf_convex);
        prop_assert!(s.is_inf_convex(&x.intersection(&y)).inf_convex);
    }

    #[test]
    fn maximal_elements_dominate(seed in any::<u64>(), mask in 1u32..) {
        let s = space(seed, 12);
        let n = s.len();
        let members: Vec<usize> = (0..n).filter(|&e| mask & (1 << e) != 0).collect();
        prop_assume!(!members.is_empty());
        let set = s.set(members).unwrap();
        let max = s.maximal_elements(&set).unwrap();
        prop_assert!(!max.is_empty() && max.is_subset(&set));
        for x in set.iter() {
            prop_assert!(max.iter().any(|m| s.leq(x, m)));
        }
        let comprehensive = s.down_closure(&set);
        prop_assert!(s.is_comprehensive(&comprehensive));
        prop_assert_eq!(s.maximal_elements(&comprehensive).unwrap(), max);
    }

    #[test]
    fn product_order_is_componentwise(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (space(a, 5), space(b, 5));
        let p = ProductSemilattice::new(vec![x.clone(), y.clone()]).unwrap();
        let flat = p.flatten();
        prop_assert!(flat.check_axioms().is_valid());
        for i in 0..p.len() {
            let ti = p.decode(i);
            prop_assert_eq!(p.encode(&ti).unwrap(), i);
            for j in 0..p.len() {
                let tj = p.decode(j);
                let componentwise = x.leq(ti[0], tj[0]) && y.leq(ti[1], tj[1]);
                prop_assert_eq!(p.leq(&ti, &tj), componentwise);
                prop_assert_eq!(flat.leq(i, j), componentwise);
                prop_assert_eq!(p.decode(flat.meet(i, j)), p.meet(&ti, &tj));
                prop_assert_eq!(i < j, ti < tj);
            }
        }
    }

    #[test]
    fn min_of_quasi_leontief_components_is_quasi_leontief(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (space(a, 5), space(b, 5));
        let mut r = random::rng(a ^ b);
        let fx = random::ql_function(&mut r, &x);
        let fy = random::ql_function(&mut r, &y);
        let p = ProductSemilattice::new(vec![x, y]).unwrap();
        let agg = MinAggregate::new(p.clone(), vec![fx.clone(), fy.clone()]).unwrap();
        let table = agg.tabulate();
        prop_assert!(table.is_quasi_leontief().is_ql);
        for i in 0..p.len() {
            let t = p.decode(i);
            prop_assert_eq!(table.value(i), fx.value(t[0]).min(fy.value(t[1])));
        }
    }

    #[test]
    fn level_set_characterization(seed in any::<u64>()) {
        let s = space(seed, 12);
        let o = Space::of(&s);
        let mut r = random::rng(seed.rotate_left(7));
        for _ in 0..8 {
            let f = random::arbitrary_function(&mut r, &s);
            let cert = f.is_quasi_leontief();
            prop_assert_eq!(cert.is_ql, is_ql(&o, f.values()));
            prop_assert_eq!(cert.meet_min_violation.is_none(), cert.is_ql);
            prop_assert_eq!(cert.level_witness.is_none(), cert.is_ql);
            let g = random::ql_function(&mut r, &s);
            prop_assert!(is_ql(&o, g.values()));
            prop_assert!(g.is_isotone());
            prop_assert!(g.check_inf_quasiconcavity().holds);
            prop_assert!(g.upper_level_sets_inf_convex() && g.strict_level_sets_inf_convex());
        }
    }

    #[test]
    fn residual_laws(seed in any::<u64>()) {
        let s = space(seed, 12);
        let mut r = random::rng(seed.rotate_left(3));
        let f = random::ql_function(&mut r, &s);
        let q = QuasiLeontief::new(f.clone()).unwrap();
        for x in s.elements() {
            for &t in f.values() {
                let m = q.sharp(t).unwrap();
                prop_assert_eq!(s.leq(m, x), t <= f.value(x));
            }
            let c = q.circ(x);
            prop_assert!(s.leq(c, x));
            prop_assert_eq!(q.circ(c), c);
            prop_assert_eq!(f.value(c), f.value(x));
        }
        let full = s.full_set();
        let eff = f.efficient_set(&full);
        prop_assert_eq!(&eff, &q.fixed_points());
        prop_assert_eq!(&eff, &q.image());
        prop_assert!(s.is_chain(&eff));
        let best = f.argmax_set(&full).unwrap();
        prop_assert!(s.is_inf_convex(&best).sub_semilattice);
    }

    #[test]
    fn global_game_invariants(seed in any::<u64>()) {
        let g = global_game(&mut random::rng(seed), GlobalGameParams { comprehensive_constraints: true, ..GlobalGameParams::default() });
        let o = Oracle::of(&g);
        let nash = g.nash_enumerate(1_000_000).unwrap();
        for x in g.profiles() {
            let cert = g.is_nash(&x).unwrap();
            prop_assert!(cert.verify(&g));
            prop_assert_eq!(cert.is_nash, o.is_nash(x.coordinates()));
            prop_assert_eq!(g.characterize_nash(&x).unwrap().is_nash, cert.is_nash);
        }
        for x in &nash {
            let y = g.normalize_nash(x).unwrap();
            prop_assert!(g.is_nash(&y).unwrap().is_nash);
            for i in 0..g.players() {
                prop_assert!(g.efficiency_report(x, i).is_ok());
            }
        }
        let m = g.maximal_nash(1_000_000).unwrap();
        prop_assert!(nash.contains(&m));
    }

    #[test]
    fn deviations_over_whole_spaces_when_unconstrained(seed in any::<u64>()) {
        let g = global_game(&mut random::rng(seed), GlobalGameParams::default());
        for x in g.profiles() {
            let over_spaces = (0..g.players()).all(|i| {
                let current = g.payoff(i, &x).unwrap();
                g.space(i).elements().all(|z| g.payoff(i, &x.with(i, z)).unwrap() <= current)
            });
            prop_assert_eq!(g.is_nash(&x).unwrap().is_nash, over_spaces);
        }
    }

    #[test]
    fn e_map_iteration_only_reports_certified_points(seed in any::<u64>()) {
        let g = individual_game(&mut random::rng(seed), 2, 5);
        for x in g.profiles() {
            let trace = g.e_map_iterate(&x, 20).unwrap();
            prop_assert_eq!(&trace.trace[0], &x);
            if let Some(p) = trace.fixed_point {
                prop_assert!(g.is_efficient_nash(&p).unwrap());
                prop_assert!(g.e_map(&p).unwrap().contains(&p));
            }
        }
    }

    #[test]
    fn spec_files_round_trip(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let game = if seed % 2 == 0 {
            global_game(&mut r, GlobalGameParams { comprehensive_constraints: seed % 4 == 0, ..GlobalGameParams::default() })
        } else {
            individual_game(&mut r, 2, 4)
        };
        let file = GameSpecFile::from_game(&game);
        let text = file.to_json();
        prop_assert_eq!(&GameSpecFile::from_json(&text).unwrap(), &file);
        prop_assert_eq!(parse_spec_str(&text).unwrap().game, game);
    }
}
