use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::sample::{random_stratum_point, random_tensor, random_tree, random_trivial_point, random_weighted_chain};
use crate::geometry::{
    config_from_chain, config_from_tree, konts_coface, konts_point, pair_difference, stratum_of, tau_tensor, ExtendedChain, Stratum,
    EPS_ALGEBRAIC, EPS_GEO,
};
use crate::verify::{Check, VerifyOptions};

/// Per-`(m, n)` seed derived from the run seed.
fn stream(seed: u64, m: usize, n: usize, salt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((m as u64) << 40) | ((n as u64) << 20) | salt);
    rng
}

#[derive(Default)]
struct Tally {
    count: u64,
    max_dev: f64,
    bad: Vec<String>,
}

impl Tally {
    fn deviation(&mut self, d: f64, tolerance: f64, what: impl FnOnce() -> String) {
        self.count += 1;
        self.max_dev = self.max_dev.max(d);
        if d > tolerance {
            self.bad.push(what());
        }
    }

    fn exact(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.bad.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.count += 1;
        self.bad.push(what);
    }
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub(crate) fn geometry(opts: &VerifyOptions) -> Vec<Check> {
    let samples = opts.samples.max(1);
    let n_top = opts.n_max.unwrap_or(5);
    let mut round_trip = Tally::default();
    let mut walking = Tally::default();
    let mut positivity = Tally::default();
    let mut coface_identity = Tally::default();
    let mut coface_geometry = Tally::default();
    let mut coherence = Tally::default();
    let mut continuity = Tally::default();
    let mut trivial = Tally::default();
    let collapse = opts.collapse;
    for m in opts.heights(&[2, 3]) {
        for n in 1..=n_top {
            let mut rng = stream(opts.seed, m, n, 0);
            for _ in 0..samples {
                let tree = random_tree(&mut rng, m, n);
                let theta: Vec<f64> = (1..n).map(|_| rng.gen_range(0.01..10.0)).collect();
                let back = config_from_tree(&tree, &theta).and_then(|c| stratum_of(&c, EPS_GEO));
                round_trip.exact(back.as_ref() == Ok(&tree), || format!("{tree} with θ = {theta:?} read back as {back:?}"));

                let w = random_weighted_chain(&mut rng, m, n, 4);
                match config_from_chain(&w) {
                    Ok(c) => {
                        let lead = w.lambda.iter().position(|&l| l > 0.0).expect("convex");
                        for i in 1..=n {
                            for j in i + 1..=n {
                                let direct = c.difference(i, j);
                                let walked = pair_difference(&w, i, j).expect("valid pair");
                                walking.deviation(max_abs(&direct, &walked), EPS_ALGEBRAIC, || format!("chain {:?}, pair ({i}, {j})", w.trees));
                                let (order, depth) = w.trees[lead].pair_depth(i, j).expect("valid pair");
                                let component = f64::from(order.sign()) * walked[depth];
                                positivity.exact(component > 0.0, || format!("chain {:?}, pair ({i}, {j})", w.trees));
                            }
                        }
                        let tau = tau_tensor(&ExtendedChain::from_plain(&w), &Stratum::plain(&w.trees), collapse);
                        match (tau, konts_point(&c)) {
                            (Ok(t), Ok(k)) => coherence.deviation(t.distance(&k), EPS_GEO, || format!("chain {:?}", w.trees)),
                            (t, k) => coherence.fail(format!("chain {:?}: {:?} / {:?}", w.trees, t.err(), k.err())),
                        }
                    }
                    Err(e) => walking.fail(format!("chain {:?}: {e}", w.trees)),
                }

                let t = random_tensor(&mut rng, m, n);
                for j in 1..=n + 2 {
                    for i in 0..j {
                        let lhs = konts_coface(i, &t, collapse).and_then(|x| konts_coface(j, &x, collapse));
                        let rhs = konts_coface(j - 1, &t, collapse).and_then(|x| konts_coface(i, &x, collapse));
                        coface_identity.exact(matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a == b), || format!("d{j} d{i} on {n} points"));
                    }
                }

                for i in 1..=n {
                    let check = || -> Result<bool> {
                        let up = tree.coface(i)?;
                        let k = konts_point(&config_from_tree(&up, &vec![1.0; n])?)?;
                        Ok(k.entry(i, i + 1) == collapse.vector(m))
                    };
                    coface_geometry.exact(check().unwrap_or(false), || format!("d{i} of {tree}"));
                }
            }

            let mut rng = stream(opts.seed, m, n, 1);
            for _ in 0..samples {
                let ell = rng.gen_range(n..=n_top.max(n));
                let Some((w, s)) = random_stratum_point(&mut rng, m, n, ell, 3) else { continue };
                check_limit(&w, &s, collapse, &mut continuity);
                let (w, s) = random_trivial_point(&mut rng, m, n, ell, 3);
                match tau_tensor(&w, &s, collapse) {
                    Ok(t) => trivial.exact(t.entries.iter().all(|e| *e == collapse.vector(m)), || format!("trivial stratum over {:?}", w.trees)),
                    Err(e) => trivial.fail(format!("trivial stratum over {:?}: {e}", w.trees)),
                }
                check_limit(&w, &s, collapse, &mut continuity);
            }
        }
    }
    let numeric = |name: &str, t: &Tally, tol: f64| Check::numeric(name, t.count, t.max_dev, tol, &t.bad);
    vec![
        Check::exact("stratum-round-trip", round_trip.count, &round_trip.bad),
        numeric("walking-man", &walking, EPS_ALGEBRAIC),
        Check::exact("leading-component", positivity.count, &positivity.bad),
        Check::exact("coface-identity", coface_identity.count, &coface_identity.bad),
        Check::exact("coface-collapse-direction", coface_geometry.count, &coface_geometry.bad),
        numeric("tau-coherence", &coherence, EPS_GEO),
        Check::exact("trivial-stratum-constant", trivial.count, &trivial.bad),
        numeric("tau-continuity", &continuity, 1e-3),
    ]
}

/// Compares `τ` at a stratum point with the plain tensor obtained by
/// replacing `0` by `1e−6` and `∞` by `1e6`.
fn check_limit(w: &ExtendedChain, s: &Stratum, collapse: crate::geometry::CollapseDirection, tally: &mut Tally) {
    let run = || -> Result<f64> {
        let exact = tau_tensor(w, s, collapse)?;
        let near = konts_point(&config_from_chain(&w.approximate(1e-6, 1e6)?)?)?;
        Ok(exact.distance(&near))
    };
    match run() {
        Ok(d) => tally.deviation(d, 1e-3, || format!("stratum φ = {} over {:?}", s.phi, w.trees)),
        Err(e) => tally.fail(format!("stratum φ = {} over {:?}: {e}", s.phi, w.trees)),
    }
}
