//! Acceptance suite: every check is exact (rational arithmetic, zero
//! tolerance) and prints one pass line with its runtime, which is
//! asserted against the stated budget.

mod common;

use std::time::{Duration, Instant};

use rand::Rng;

use dvy_core::diversity::{check_axioms, verify_violation, CheckMode, FiniteDiversity};
use dvy_core::phylo::{canonicalize, four_point_check, reconstruct_tree, tree_diversity};
use dvy_core::rat::Rat;
use dvy_core::steiner::{
    abstract_steiner, diversity_steiner, metric_steiner_exact, steiner_lower_bounds,
};
use dvy_core::tightspan::{
    delta_t, delta_t_via_distinguished, hyperconvex_extension, in_t, kuratowski_at,
    kuratowski_family, sample_tight, three_point_complex, three_point_membership, Constraint,
    SpanFunction,
};
use dvy_core::{diameter_diversity, induced_metric, truncate, FiniteMetric, GroundSet, SubsetMask};

use common::{labels, random_diversity, random_graph_instance, random_metric, random_tree, rng};

fn finish(name: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    println!("criterion {name}: PASS in {elapsed:.2?} (budget {budget:?})");
    assert!(
        elapsed < budget,
        "criterion {name} exceeded its runtime budget: {elapsed:?}"
    );
}

/// Criterion 1: constructor outputs pass the full axiom check on 100
/// seeded instances per family; 100 downward single-value mutations of
/// tree diversities are rejected with re-verifiable witnesses.
#[test]
fn criterion_1_axiom_suites() {
    let start = Instant::now();
    let mut rng = rng(101);
    let full_pass = |delta: &FiniteDiversity| {
        let report = check_axioms(delta.ground(), delta.values(), CheckMode::Full).unwrap();
        assert!(report.pass, "constructor output failed the axiom check");
    };
    for i in 0..100 {
        let n = 3 + i % 4; // 3..=6
        full_pass(&diameter_diversity(&random_metric(&mut rng, n)));
        full_pass(&dvy_core::l1_diversity(&common::random_points(
            &mut rng,
            n,
            1 + i % 3,
        )));
        let tree = random_tree(&mut rng, &labels(n));
        full_pass(&tree_diversity(&tree, &labels(n)).unwrap());
        let instance = random_graph_instance(&mut rng, n, n + 4);
        full_pass(&dvy_core::steiner::steiner_length_diversity(&instance).unwrap());
        let base = diameter_diversity(&random_metric(&mut rng, n));
        full_pass(&truncate(&base, 2 + i % (n - 1)).unwrap());
    }
    // Mutations: lowering one value of size >= 3 strictly below its
    // largest inner pair always breaks monotonicity.
    for i in 0..100 {
        let n = 3 + i % 4;
        let names = labels(n);
        let tree = random_tree(&mut rng, &names);
        let delta = tree_diversity(&tree, &names).unwrap();
        let ground = delta.ground().clone();
        let masks: Vec<SubsetMask> = ground.masks().filter(|m| m.card() >= 3).collect();
        let target = masks[rng.gen_range(0..masks.len())];
        let max_pair = target
            .iter()
            .flat_map(|a| {
                target
                    .iter()
                    .filter(move |&b| b > a)
                    .map(move |b| SubsetMask::singleton(a).union(SubsetMask::singleton(b)))
            })
            .map(|pair| delta.value(pair).clone())
            .max()
            .unwrap();
        let mut values = delta.values().to_vec();
        values[target.index()] = Rat::frac(1, 2) * &max_pair;
        let report = check_axioms(&ground, &values, CheckMode::Full).unwrap();
        assert!(!report.pass, "downward mutation accepted");
        assert!(!report.violations.is_empty());
        for v in &report.violations {
            assert!(verify_violation(&values, v), "witness failed re-verification");
        }
    }
    finish("1 axiom-suites", start, Duration::from_secs(60));
}

fn random_three_point(
    rng: &mut rand_chacha::ChaCha8Rng,
    high_triple: bool,
) -> (Rat, Rat, Rat, Rat) {
    let m = random_metric(rng, 3);
    let (d12, d13, d23) = (m.dist(0, 1).clone(), m.dist(0, 2).clone(), m.dist(1, 2).clone());
    let max_pair = d12.clone().max(d13.clone()).max(d23.clone());
    let min_sum = (&d12 + &d13).min(&d12 + &d23).min(&d13 + &d23);
    let t = if high_triple {
        Rat::frac(rng.gen_range(5..=8), 8)
    } else {
        Rat::frac(rng.gen_range(0..=3), 8)
    };
    let d123 = &max_pair + &(&t * &(&min_sum - &max_pair));
    (d12, d13, d23, d123)
}

/// Criterion 2: the closed-form three-point membership test agrees with
/// the general tight-span membership on every candidate, exactly.
#[test]
fn criterion_2_three_point_oracle_agreement() {
    let start = Instant::now();
    let mut rng = rng(202);
    let ground = GroundSet::new(["1", "2", "3"]).unwrap();

    let mut tuples: Vec<(Rat, Rat, Rat, Rat)> = vec![
        // The two anchored instances: beta = 0 and beta = 3/5.
        (Rat::from_int(2), Rat::from_int(2), Rat::from_int(2), Rat::from_int(3)),
        (Rat::from_int(2), Rat::from_int(3), Rat::from_int(4), Rat::frac(24, 5)),
    ];
    for i in 0..25 {
        tuples.push(random_three_point(&mut rng, i % 2 == 0));
    }

    let mut zero_beta = 0;
    let mut pos_beta = 0;
    let mut checked = 0;
    for (d12, d13, d23, d123) in &tuples {
        let complex =
            three_point_complex(d12.clone(), d13.clone(), d23.clone(), d123.clone()).unwrap();
        if complex.beta.is_zero() {
            zero_beta += 1;
        } else {
            pos_beta += 1;
        }
        let mut values = vec![Rat::zero(); 8];
        values[0b011] = d12.clone();
        values[0b101] = d13.clone();
        values[0b110] = d23.clone();
        values[0b111] = d123.clone();
        let delta = FiniteDiversity::new(ground.clone(), values, CheckMode::Full).unwrap();

        let segment_point = |rng: &mut rand_chacha::ChaCha8Rng| -> [Rat; 3] {
            let i = rng.gen_range(0..3);
            let t = Rat::frac(rng.gen_range(0..=8), 8);
            let (u, v) = (&complex.u[i + 1], &complex.v[i]);
            [
                u[0].clone() + &t * &(&v[0] - &u[0]),
                u[1].clone() + &t * &(&v[1] - &u[1]),
                u[2].clone() + &t * &(&v[2] - &u[2]),
            ]
        };
        let tetra_point = |rng: &mut rand_chacha::ChaCha8Rng| -> [Rat; 3] {
            let draws: Vec<i64> = (0..4).map(|_| rng.gen_range(0..=4)).collect();
            let total: i64 = draws.iter().sum::<i64>().max(1);
            let u0 = &complex.u[0];
            [
                &u0[0] - &(&complex.beta * &Rat::frac(draws[0], total)),
                &u0[1] - &(&complex.beta * &Rat::frac(draws[1], total)),
                &u0[2] - &(&complex.beta * &Rat::frac(draws[2], total)),
            ]
        };

        for k in 0..200 {
            let candidate: SpanFunction = match k % 4 {
                0 => complex.extend_point(&ground, &segment_point(&mut rng)).unwrap(),
                1 => complex.extend_point(&ground, &tetra_point(&mut rng)).unwrap(),
                2 => {
                    // Perturb one coordinate of a complex point.
                    let base = if k % 8 < 4 {
                        segment_point(&mut rng)
                    } else {
                        tetra_point(&mut rng)
                    };
                    let f = complex.extend_point(&ground, &base).unwrap();
                    let mut values = f.values().to_vec();
                    let idx = rng.gen_range(1..8);
                    let bump = Rat::frac(rng.gen_range(-2..=2), rng.gen_range(5..=9));
                    values[idx] = &values[idx] + &bump;
                    SpanFunction::new(ground.clone(), values).unwrap()
                }
                _ => {
                    if k % 8 < 4 {
                        kuratowski_at(&delta, rng.gen_range(0..3))
                    } else {
                        let p = [
                            Rat::frac(rng.gen_range(0..=12), rng.gen_range(1..=3)),
                            Rat::frac(rng.gen_range(0..=12), rng.gen_range(1..=3)),
                            Rat::frac(rng.gen_range(0..=12), rng.gen_range(1..=3)),
                        ];
                        complex.extend_point(&ground, &p).unwrap()
                    }
                }
            };
            let fast = three_point_membership(&complex, &candidate).unwrap();
            let slow = in_t(&delta, &candidate).unwrap().in_t;
            assert_eq!(
                fast, slow,
                "oracles disagree on {:?} for ({d12},{d13},{d23};{d123})",
                candidate.values()
            );
            checked += 1;
        }
    }
    assert_eq!(checked, tuples.len() * 200);
    assert!(zero_beta > 0 && pos_beta > 0, "tuples must span both regimes");
    finish("2 three-point-oracle", start, Duration::from_secs(30));
}

/// Criterion 3: the Kuratowski map is an embedding and satisfies the
/// pointed identity against sampled tight points, with exact equality.
#[test]
fn criterion_3_embedding_identities() {
    let start = Instant::now();
    let mut rng = rng(303);
    for i in 0..50u64 {
        let n = 2 + (i as usize) % 4; // 2..=5
        let delta = random_diversity(&mut rng, n);
        let ground = delta.ground().clone();
        for y in ground.masks() {
            if y.is_empty() {
                continue;
            }
            let family = kuratowski_family(&delta, y);
            let refs: Vec<&SpanFunction> = family.iter().collect();
            assert_eq!(
                delta_t(&delta, &refs).unwrap(),
                *delta.value(y),
                "embedding identity fails on instance {i}"
            );
        }
        let samples = sample_tight(&delta, 9000 + i, 5).unwrap();
        for f in &samples {
            assert_eq!(delta_t(&delta, &[f]).unwrap(), Rat::zero());
            for y in ground.masks() {
                if y.is_empty() {
                    continue;
                }
                let mut family = kuratowski_family(&delta, y);
                family.push(f.clone());
                let refs: Vec<&SpanFunction> = family.iter().collect();
                assert_eq!(
                    delta_t(&delta, &refs).unwrap(),
                    *f.value(y),
                    "pointed identity fails on instance {i}"
                );
            }
        }
    }
    finish("3 embedding-identities", start, Duration::from_secs(120));
}

/// Criterion 4: the tight-span diversity satisfies the axioms on sampled
/// families and the distinguished-member formula matches the cover
/// formula for every choice of member.
#[test]
fn criterion_4_tight_span_diversity_axioms() {
    let start = Instant::now();
    let mut rng = rng(404);
    for i in 0..50u64 {
        let n = 2 + (i as usize) % 4;
        let delta = random_diversity(&mut rng, n);
        let mut pool = sample_tight(&delta, 40_000 + i, 6).unwrap();
        pool.extend(kuratowski_family(&delta, delta.ground().full_mask()));
        pool.sort();
        pool.dedup();

        // Vanishing exactly on singleton families.
        for f in pool.iter().take(3) {
            assert_eq!(delta_t(&delta, &[f]).unwrap(), Rat::zero());
        }
        if pool.len() >= 2 {
            let refs: Vec<&SpanFunction> = pool.iter().take(2).collect();
            assert!(delta_t(&delta, &refs).unwrap() > Rat::zero());
        }

        // Monotonicity under family inclusion, on a random chain.
        let take = pool.len().min(4);
        let mut value = Rat::zero();
        for size in 1..=take {
            let refs: Vec<&SpanFunction> = pool.iter().take(size).collect();
            let next = delta_t(&delta, &refs).unwrap();
            assert!(next >= value, "monotonicity fails on instance {i}");
            value = next;
        }

        // Triangle inequality over sampled disjoint family triples with a
        // nonempty middle.
        if pool.len() >= 3 {
            for _ in 0..4 {
                let mut indices: Vec<usize> = (0..pool.len()).collect();
                for j in (1..indices.len()).rev() {
                    let k = rng.gen_range(0..=j);
                    indices.swap(j, k);
                }
                let a_count = rng.gen_range(0..=(indices.len() - 1).min(2));
                let b_count = rng.gen_range(1..=(indices.len() - a_count).min(2));
                let c_count =
                    rng.gen_range(0..=(indices.len() - a_count - b_count).min(2));
                let fam_a: Vec<&SpanFunction> =
                    indices[..a_count].iter().map(|&j| &pool[j]).collect();
                let fam_b: Vec<&SpanFunction> = indices[a_count..a_count + b_count]
                    .iter()
                    .map(|&j| &pool[j])
                    .collect();
                let fam_c: Vec<&SpanFunction> = indices
                    [a_count + b_count..a_count + b_count + c_count]
                    .iter()
                    .map(|&j| &pool[j])
                    .collect();
                fn join<'a>(
                    x: &[&'a SpanFunction],
                    y: &[&'a SpanFunction],
                ) -> Vec<&'a SpanFunction> {
                    x.iter().chain(y.iter()).copied().collect()
                }
                let ac = join(&fam_a, &fam_c);
                let ab = join(&fam_a, &fam_b);
                let bc = join(&fam_b, &fam_c);
                if ac.is_empty() {
                    continue;
                }
                let lhs = delta_t(&delta, &ac).unwrap();
                let rhs =
                    delta_t(&delta, &ab).unwrap() + delta_t(&delta, &bc).unwrap();
                assert!(lhs <= rhs, "triangle fails on instance {i}");
            }
        }

        // Distinguished-member formula equals the cover formula.
        let family: Vec<&SpanFunction> = pool.iter().take(take.max(1)).collect();
        let full = delta_t(&delta, &family).unwrap();
        for f in &family {
            let rest: Vec<&SpanFunction> = family
                .iter()
                .filter(|g| g.values() != f.values())
                .copied()
                .collect();
            assert_eq!(
                delta_t_via_distinguished(&delta, f, &rest).unwrap(),
                full,
                "distinguished formula fails on instance {i}"
            );
        }
    }
    finish("4 tight-span-axioms", start, Duration::from_secs(120));
}

/// Criterion 5: tight spans of diameter diversities are diameter
/// diversities (pairwise maxima), and the three-point complex of a
/// diameter diversity is the classical tripod with Gromov-product legs.
#[test]
fn criterion_5_diameter_tight_span() {
    let start = Instant::now();
    let mut rng = rng(505);
    for i in 0..50u64 {
        let n = 2 + (i as usize) % 4;
        let metric = random_metric(&mut rng, n);
        let delta = diameter_diversity(&metric);
        let mut pool = sample_tight(&delta, 70_000 + i, 4).unwrap();
        pool.extend(kuratowski_family(&delta, delta.ground().full_mask()));
        pool.sort();
        pool.dedup();
        let size = pool.len().min(4);
        let family: Vec<&SpanFunction> = pool.iter().take(size).collect();
        if family.len() >= 2 {
            let whole = delta_t(&delta, &family).unwrap();
            let mut best = Rat::zero();
            for a in 0..family.len() {
                for b in a + 1..family.len() {
                    let pair = delta_t(&delta, &[family[a], family[b]]).unwrap();
                    if pair > best {
                        best = pair;
                    }
                }
            }
            assert_eq!(whole, best, "diameter property fails on instance {i}");
        }
    }

    // n = 3 closed form: always a tripod centered at the Gromov point.
    for _ in 0..50 {
        let metric = random_metric(&mut rng, 3);
        let delta = diameter_diversity(&metric);
        let (d12, d13, d23) = (
            metric.dist(0, 1).clone(),
            metric.dist(0, 2).clone(),
            metric.dist(1, 2).clone(),
        );
        let d123 = delta.value(SubsetMask(0b111)).clone();
        let complex = three_point_complex(d12.clone(), d13.clone(), d23.clone(), d123).unwrap();
        assert!(complex.beta.is_zero());
        let half = Rat::frac(1, 2);
        let gromov = [
            &half * &(&(&d12 + &d13) - &d23),
            &half * &(&(&d12 + &d23) - &d13),
            &half * &(&(&d13 + &d23) - &d12),
        ];
        assert_eq!(complex.u[0], gromov);
        let center = complex.extend_point(delta.ground(), &complex.u[0].clone()).unwrap();
        for leg in 0..3 {
            let v = complex
                .extend_point(delta.ground(), &complex.v[leg].clone())
                .unwrap();
            assert_eq!(
                delta_t(&delta, &[&center, &v]).unwrap(),
                gromov[leg],
                "leg length is not the Gromov product"
            );
        }
    }
    finish("5 diameter-tight-span", start, Duration::from_secs(60));
}

/// Criterion 6: subtree-length diversities reconstruct their tree
/// exactly (topology and weights), and sampled tight points of quartet
/// diversities induce additive pairwise distances.
#[test]
fn criterion_6_phylogenetic_round_trip() {
    let start = Instant::now();
    let mut rng = rng(606);
    for i in 0..50 {
        let n = 2 + i % 7; // 2..=8 leaves
        let names = labels(n);
        let tree = random_tree(&mut rng, &names);
        let delta = tree_diversity(&tree, &names).unwrap();
        let rebuilt = reconstruct_tree(&delta).unwrap();
        assert_eq!(
            canonicalize(&rebuilt).unwrap(),
            canonicalize(&tree).unwrap(),
            "round trip fails on instance {i}"
        );
    }

    for i in 0..10u64 {
        let names = labels(4);
        let tree = random_tree(&mut rng, &names);
        let delta = tree_diversity(&tree, &names).unwrap();
        let mut pool = sample_tight(&delta, 80_000 + i, 5).unwrap();
        pool.extend(kuratowski_family(&delta, delta.ground().full_mask()));
        pool.sort();
        pool.dedup();
        if pool.len() < 4 {
            continue;
        }
        let m = pool.len();
        let mut dist = vec![vec![Rat::zero(); m]; m];
        for a in 0..m {
            for b in a + 1..m {
                let d = delta_t(&delta, &[&pool[a], &pool[b]]).unwrap();
                dist[a][b] = d.clone();
                dist[b][a] = d;
            }
        }
        let point_ground =
            GroundSet::new((0..m).map(|k| format!("p{k}"))).unwrap();
        let metric = FiniteMetric::new(point_ground, dist).unwrap();
        let (ok, witness) = four_point_check(&metric);
        assert!(
            ok,
            "tight points of a quartet diversity violate additivity: {witness:?}"
        );
    }
    finish("6 phylogenetic-round-trip", start, Duration::from_secs(60));
}

/// Criterion 7: the truncation ladder is monotone and lands exactly on
/// the metric Steiner optimum; the pairwise bound matches the abstract
/// problem; tree diversities recover their own weight; the synthetic
/// pairs-2/triple-4 instance separates the two problems (3 vs 4).
#[test]
fn criterion_7_steiner_ladder() {
    let start = Instant::now();
    let mut rng = rng(707);

    let mut instances = Vec::new();
    for i in 0..25 {
        instances.push(random_graph_instance(&mut rng, 2 + i % 4, 12));
    }
    // Fixtures: unit star and square with center.
    let star = dvy_core::steiner::Graph::new(
        vec!["s".into(), "a".into(), "b".into(), "c".into()],
        vec![
            ("s".into(), "a".into(), Rat::one()),
            ("s".into(), "b".into(), Rat::one()),
            ("s".into(), "c".into(), Rat::one()),
        ],
    )
    .unwrap();
    instances.push(
        dvy_core::steiner::MetricInstance::from_graph(
            star,
            &["a".into(), "b".into(), "c".into()],
        )
        .unwrap(),
    );
    let square = dvy_core::steiner::Graph::new(
        vec!["1".into(), "2".into(), "3".into(), "4".into(), "m".into()],
        vec![
            ("1".into(), "2".into(), Rat::from_int(4)),
            ("2".into(), "3".into(), Rat::from_int(4)),
            ("3".into(), "4".into(), Rat::from_int(4)),
            ("4".into(), "1".into(), Rat::from_int(4)),
            ("m".into(), "1".into(), Rat::from_int(3)),
            ("m".into(), "2".into(), Rat::from_int(3)),
            ("m".into(), "3".into(), Rat::from_int(3)),
            ("m".into(), "4".into(), Rat::from_int(3)),
        ],
    )
    .unwrap();
    instances.push(
        dvy_core::steiner::MetricInstance::from_graph(
            square,
            &["1".into(), "2".into(), "3".into(), "4".into()],
        )
        .unwrap(),
    );

    for (idx, instance) in instances.iter().enumerate() {
        let n = instance.terminal_names().len();
        let ladder = steiner_lower_bounds(instance, n.max(2)).unwrap();
        let exact = metric_steiner_exact(instance, &instance.terminal_names()).unwrap();
        assert_eq!(exact.length, ladder.exact.length);
        let mut last = Rat::zero();
        for (k, sol) in &ladder.bounds {
            assert!(sol.length >= last, "ladder dips at k={k} on instance {idx}");
            last = sol.length.clone();
            assert!(sol.length <= ladder.exact.length);
        }
        assert_eq!(
            ladder.bounds.last().unwrap().1.length,
            ladder.exact.length,
            "full-order bound must equal the exact optimum (instance {idx})"
        );
        // Pairwise bound coincides with the abstract problem.
        let lengths = dvy_core::steiner::steiner_length_diversity(instance).unwrap();
        let pairwise = abstract_steiner(&induced_metric(&lengths)).unwrap();
        assert_eq!(ladder.bounds[0].1.length, pairwise.length);
    }

    // Tree self-recovery.
    for i in 0..10 {
        let n = 2 + i % 4;
        let names = labels(n);
        let tree = random_tree(&mut rng, &names);
        let delta = tree_diversity(&tree, &names).unwrap();
        let sol = diversity_steiner(&delta).unwrap();
        assert_eq!(sol.length, tree.total_weight());
    }

    // The synthetic separation instance.
    let ground = GroundSet::new(["1", "2", "3"]).unwrap();
    let mut values = vec![Rat::zero(); 8];
    values[0b011] = Rat::from_int(2);
    values[0b101] = Rat::from_int(2);
    values[0b110] = Rat::from_int(2);
    values[0b111] = Rat::from_int(4);
    let synthetic = FiniteDiversity::new(ground, values, CheckMode::Full).unwrap();
    assert_eq!(
        abstract_steiner(&induced_metric(&synthetic)).unwrap().length,
        Rat::from_int(3)
    );
    assert_eq!(diversity_steiner(&synthetic).unwrap().length, Rat::from_int(4));

    finish("7 steiner-ladder", start, Duration::from_secs(180));
}

/// Criterion 8: the constructive extension returns a certified tight
/// point within every prescribed radius whenever the premise holds.
#[test]
fn criterion_8_hyperconvex_extension() {
    let start = Instant::now();
    let mut rng = rng(808);
    for i in 0..20u64 {
        let n = 2 + (i as usize) % 3; // 2..=4
        let delta = random_diversity(&mut rng, n);
        let pool = sample_tight(&delta, 90_000 + i, 4).unwrap();

        if i % 5 == 0 {
            // Zero radius forces coincidence with the constrained point.
            let target = pool[0].clone();
            let c = Constraint::new(vec![target.clone()], Rat::zero()).unwrap();
            let g = hyperconvex_extension(&delta, &[c]).unwrap();
            assert_eq!(g.values(), target.values());
            continue;
        }

        let n_constraints = 1 + (i as usize) % 3;
        let all_refs: Vec<&SpanFunction> = pool.iter().collect();
        let spread = delta_t(&delta, &all_refs).unwrap();
        let mut constraints = Vec::new();
        for c in 0..n_constraints {
            let take = 1 + (c + i as usize) % 2;
            let family: Vec<SpanFunction> = pool
                .iter()
                .cycle()
                .skip(c)
                .take(take)
                .cloned()
                .collect();
            let slack = Rat::frac(rng.gen_range(0..=4), 2);
            constraints.push(Constraint::new(family, &spread + &slack).unwrap());
        }
        let g = hyperconvex_extension(&delta, &constraints).unwrap();
        assert!(in_t(&delta, &g).unwrap().in_t, "extension must be tight");
        for c in &constraints {
            let mut refs: Vec<&SpanFunction> = c.family().iter().collect();
            refs.push(&g);
            let val = delta_t(&delta, &refs).unwrap();
            assert!(
                val <= *c.radius(),
                "extension misses radius on instance {i}: {val} > {}",
                c.radius()
            );
        }
    }
    finish("8 hyperconvex-extension", start, Duration::from_secs(60));
}
