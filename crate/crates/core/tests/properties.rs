use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gleafkit::finset::ordinal;
use gleafkit::metric::{metric_glue, random_metric, MetricGleaf};
use gleafkit::probability::{dist_glue, Dist};
use gleafkit::rational::{format_q, parse_q, sum};
use gleafkit::relational::{natural_join, uniform_schema, Relation};
use gleafkit::topology::{all_topologies, top_glue, FinTopology};
use gleafkit::{FinMap, FinSet, Gleaf, Label, Q};

/// Two subsets of `ordinal(n)` that together cover it.
fn split(n: usize, mask_a: u32, mask_b: u32) -> (FinSet, FinSet) {
    let points: Vec<Label> = ordinal(n).into_iter().collect();
    let in_a = |i: usize| mask_a >> i & 1 == 1;
    let a = (0..points.len()).filter(|&i| in_a(i)).map(|i| points[i].clone()).collect();
    let b = (0..points.len()).filter(|&i| !in_a(i) || mask_b >> i & 1 == 1).map(|i| points[i].clone()).collect();
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn metric_glue_is_the_largest_compatible_metric(seed in any::<u64>(), n in 0usize..=4, ma in any::<u32>(), mb in any::<u32>(), symmetric in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_metric(&mut rng, ordinal(n), symmetric, true);
        let (a, b) = split(n, ma, mb);
        let g = MetricGleaf::new(symmetric);
        let whole = ordinal(n);
        let da = g.restrict(&d, &FinMap::inclusion(&a, &whole).unwrap()).unwrap();
        let db = g.restrict(&d, &FinMap::inclusion(&b, &whole).unwrap()).unwrap();
        let glued = metric_glue(&da, &db).unwrap();
        prop_assert_eq!(&g.restrict(&glued, &FinMap::inclusion(&a, &whole).unwrap()).unwrap(), &da);
        prop_assert_eq!(&g.restrict(&glued, &FinMap::inclusion(&b, &whole).unwrap()).unwrap(), &db);
        for x in &whole {
            for y in &whole {
                prop_assert!(d.dist(x, y).unwrap() <= glued.dist(x, y).unwrap());
            }
        }
    }

    #[test]
    fn glued_distributions_are_normalized_with_the_given_marginals(seed in any::<u64>(), n in 0usize..=3, ma in any::<u32>(), mb in any::<u32>(), size in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let outcomes: Vec<String> = (0..size).map(|o| o.to_string()).collect();
        let joint = Dist::random(&mut rng, ordinal(n), &outcomes);
        let (a, b) = split(n, ma, mb);
        let (pa, pb) = (joint.marginal(&a).unwrap(), joint.marginal(&b).unwrap());
        let glued = dist_glue(&pa, &pb).unwrap();
        let total = sum(glued.to_spec().w.values().map(|v| parse_q(v).unwrap()).collect::<Vec<_>>().iter());
        prop_assert_eq!(total, Q::from_integer(1.into()));
        prop_assert_eq!(glued.marginal(&a).unwrap(), pa);
        prop_assert_eq!(glued.marginal(&b).unwrap(), pb);
    }

    #[test]
    fn join_projects_back_onto_compatible_relations(seed in any::<u64>(), n in 0usize..=3, ma in any::<u32>(), mb in any::<u32>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let joint = Relation::random(&mut rng, &uniform_schema(ordinal(n), &["x", "y", "z"]), 1, 2);
        let (a, b) = split(n, ma, mb);
        let (ta, tb) = (joint.project(&a).unwrap(), joint.project(&b).unwrap());
        let glued = natural_join(&ta, &tb).unwrap();
        prop_assert_eq!(glued.project(&a).unwrap(), ta);
        prop_assert_eq!(glued.project(&b).unwrap(), tb);
        for row in joint.rows() {
            prop_assert!(glued.contains(&row));
        }
    }

    #[test]
    fn glued_topologies_are_topologies_with_the_given_traces(i in any::<prop::sample::Index>(), ma in any::<u32>(), mb in any::<u32>()) {
        let whole = ordinal(3);
        let all = all_topologies(&whole).unwrap();
        let t = &all[i.index(all.len())];
        let (a, b) = split(3, ma, mb);
        let (ta, tb) = (t.subspace(&a).unwrap(), t.subspace(&b).unwrap());
        let glued = top_glue(&ta, &tb).unwrap();
        let rebuilt = FinTopology::new(glued.carrier(), glued.opens());
        prop_assert!(rebuilt.is_ok());
        prop_assert_eq!(glued.subspace(&a).unwrap(), ta);
        prop_assert_eq!(glued.subspace(&b).unwrap(), tb);
        for u in t.opens() {
            prop_assert!(glued.is_open(&u));
        }
    }

    #[test]
    fn rationals_round_trip_through_strings(num in any::<i64>(), den in 1i64..=i64::MAX) {
        let v = Q::new(num.into(), den.into());
        prop_assert_eq!(parse_q(&format_q(&v)).unwrap(), v);
    }
}
