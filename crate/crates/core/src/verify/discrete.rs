use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fn_core::{classify_pair, codegeneracy_index, coface_index, enumerate_trees, is_exceptional, FnTree, MonotoneMap};
use crate::geometry::sample::{random_monotone, random_tree};
use crate::verify::{Check, VerifyOptions};

const TREE_CAP: u128 = 1_000_000;

/// The five families of cosimplicial identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityFamily {
    /// `d_j d_i = d_i d_{j−1}` for `i < j`.
    CofaceCoface,
    /// `s_j s_i = s_i s_{j+1}` for `i ≤ j`.
    CodegeneracyCodegeneracy,
    /// `s_j d_i = d_i s_{j−1}` for `i < j`.
    MixedBelow,
    /// `s_j d_i = id` for `i ∈ {j, j+1}`.
    MixedIdentity,
    /// `s_j d_i = d_{i−1} s_j` for `i > j + 1`.
    MixedAbove,
}

impl IdentityFamily {
    pub const ALL: [IdentityFamily; 5] = [
        IdentityFamily::CofaceCoface,
        IdentityFamily::CodegeneracyCodegeneracy,
        IdentityFamily::MixedBelow,
        IdentityFamily::MixedIdentity,
        IdentityFamily::MixedAbove,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityFamily::CofaceCoface => "dd",
            IdentityFamily::CodegeneracyCodegeneracy => "ss",
            IdentityFamily::MixedBelow => "sd-below",
            IdentityFamily::MixedIdentity => "sd-identity",
            IdentityFamily::MixedAbove => "sd-above",
        }
    }
}

/// Every instance of one identity family at `tree`, with a description of
/// each failing instance.
pub fn coface_identity_failures(tree: &FnTree, family: IdentityFamily) -> Result<(u64, Vec<String>)> {
    let n = tree.n();
    let mut count = 0;
    let mut bad = Vec::new();
    let mut record = |lhs: FnTree, rhs: FnTree, what: String| {
        count += 1;
        if lhs != rhs {
            bad.push(format!("{what} at {tree}: {lhs} vs {rhs}"));
        }
    };
    match family {
        IdentityFamily::CofaceCoface => {
            for j in 1..=n + 2 {
                for i in 0..j {
                    record(tree.coface(i)?.coface(j)?, tree.coface(j - 1)?.coface(i)?, format!("d{j} d{i}"));
                }
            }
        }
        IdentityFamily::CodegeneracyCodegeneracy => {
            for j in 0..n.saturating_sub(1) {
                for i in 0..=j {
                    record(tree.codegeneracy(i)?.codegeneracy(j)?, tree.codegeneracy(j + 1)?.codegeneracy(i)?, format!("s{j} s{i}"));
                }
            }
        }
        IdentityFamily::MixedBelow | IdentityFamily::MixedIdentity | IdentityFamily::MixedAbove => {
            for i in 0..=n + 1 {
                for j in 0..=n {
                    let lhs = tree.coface(i)?.codegeneracy(j)?;
                    let what = format!("s{j} d{i}");
                    match family {
                        IdentityFamily::MixedBelow if i < j => record(lhs, tree.codegeneracy(j - 1)?.coface(i)?, what),
                        IdentityFamily::MixedIdentity if i == j || i == j + 1 => record(lhs, tree.clone(), what),
                        IdentityFamily::MixedAbove if i > j + 1 => record(lhs, tree.codegeneracy(j)?.coface(i - 1)?, what),
                        _ => {}
                    }
                }
            }
        }
    }
    Ok((count, bad))
}

fn levels(opts: &VerifyOptions, default_n: usize) -> Result<Vec<(usize, Vec<FnTree>)>> {
    let n_max = opts.n_max.unwrap_or(default_n);
    let mut out = Vec::new();
    for m in opts.heights(&[2, 3]) {
        let mut trees = Vec::new();
        for n in 0..=n_max {
            trees.extend(enumerate_trees(m, n, TREE_CAP)?);
        }
        out.push((m, trees));
    }
    Ok(out)
}

pub(crate) fn cosimplicial(opts: &VerifyOptions) -> Vec<Check> {
    let levels = match levels(opts, 4) {
        Ok(l) => l,
        Err(e) => return vec![Check::from_result("enumerate", Err(e))],
    };
    let mut checks = Vec::new();
    for family in IdentityFamily::ALL {
        let run = || -> Result<Check> {
            let (mut count, mut bad) = (0, Vec::new());
            for (_, trees) in &levels {
                for t in trees {
                    let (c, b) = coface_identity_failures(t, family)?;
                    count += c;
                    bad.extend(b);
                }
            }
            Ok(Check::exact(family.name(), count, &bad))
        };
        checks.push(Check::from_result(family.name(), run()));
    }
    checks
}

pub(crate) fn poset(opts: &VerifyOptions) -> Vec<Check> {
    let levels = match levels(opts, 3) {
        Ok(l) => l,
        Err(e) => return vec![Check::from_result("enumerate", Err(e))],
    };
    let by_level = |trees: &[FnTree]| {
        let mut groups: Vec<Vec<FnTree>> = Vec::new();
        for t in trees {
            match groups.last_mut() {
                Some(g) if g[0].n() == t.n() => g.push(t.clone()),
                _ => groups.push(vec![t.clone()]),
            }
        }
        groups
    };
    let mut order = (0, Vec::new());
    let mut top = (0, Vec::new());
    let mut coface_mono = (0, Vec::new());
    let mut codeg_mono = (0, Vec::new());
    let mut injective = (0, Vec::new());
    let mut run = || -> Result<()> {
        for (_, trees) in &levels {
            for level in by_level(trees) {
                let n = level[0].n();
                let tables: Vec<_> = level.iter().map(FnTree::relation_table).collect();
                let leq = |a: usize, b: usize| tables[a].leq(&tables[b]);
                let k = level.len();
                for a in 0..k {
                    order.0 += 1;
                    if !leq(a, a) {
                        order.1.push(format!("{} ≤ itself fails", level[a]));
                    }
                    let t_top = FnTree::trivial(n, level[a].m())?;
                    top.0 += 1;
                    if t_top.leq(&level[a])? && t_top != level[a] {
                        top.1.push(format!("trivial tree below {}", level[a]));
                    }
                    for b in 0..k {
                        if a == b || !leq(a, b) {
                            continue;
                        }
                        order.0 += 1;
                        if leq(b, a) {
                            order.1.push(format!("{} and {} are mutually ≤", level[a], level[b]));
                        }
                        for c in 0..k {
                            if leq(b, c) && !leq(a, c) {
                                order.1.push(format!("transitivity fails at {} ≤ {} ≤ {}", level[a], level[b], level[c]));
                            }
                        }
                        for i in 0..=n + 1 {
                            coface_mono.0 += 1;
                            let (x, y) = (level[a].coface(i)?, level[b].coface(i)?);
                            if !x.leq(&y)? {
                                coface_mono.1.push(format!("d{i}: {} ≤ {} but {x} ≰ {y}", level[a], level[b]));
                            }
                        }
                        for j in 0..n {
                            codeg_mono.0 += 1;
                            let (x, y) = (level[a].codegeneracy(j)?, level[b].codegeneracy(j)?);
                            if !x.leq(&y)? {
                                codeg_mono.1.push(format!("s{j}: {} ≤ {} but {x} ≰ {y}", level[a], level[b]));
                            }
                        }
                    }
                }
                for i in 0..=n + 1 {
                    let mut images: Vec<FnTree> = level.iter().map(|t| t.coface(i)).collect::<Result<_>>()?;
                    images.sort();
                    injective.0 += level.len() as u64;
                    if images.windows(2).any(|w| w[0] == w[1]) {
                        injective.1.push(format!("d{i} identifies two trees with {n} leaves"));
                    }
                }
            }
        }
        Ok(())
    };
    if let Err(e) = run() {
        return vec![Check::from_result("poset", Err(e))];
    }
    vec![
        Check::exact("partial-order", order.0, &order.1),
        Check::exact("trivial-tree-maximal", top.0, &top.1),
        Check::exact("coface-monotone", coface_mono.0, &coface_mono.1),
        Check::exact("codegeneracy-monotone", codeg_mono.0, &codeg_mono.1),
        Check::exact("coface-injective", injective.0, &injective.1),
    ]
}

/// Labels of `t` by position with a leading 0, so index 0 maps to 0.
fn padded_inverse(t: &FnTree) -> Vec<usize> {
    let mut inv = vec![0; t.n() + 1];
    for p in 1..=t.n() {
        inv[t.label_at(p)] = p;
    }
    inv
}

pub(crate) fn twisted(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(Check::from_result("worked-example-permutation", worked_permutation()));
    checks.push(Check::from_result("worked-example-twisted", worked_twisted()));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let samples = opts.samples.max(1);
    checks.push(Check::from_result("composition-law", composition_law(&mut rng, samples)));
    checks.push(Check::from_result("increasing-endpoints", increasing_endpoints(&mut rng, samples)));
    checks.push(Check::from_result("consecutive-jumps", consecutive_jumps(&mut rng, samples)));
    checks.push(Check::from_result("shape-tree", shape_tree(&mut rng, samples)));
    checks.push(Check::from_result("degeneracy-after-coface", degeneracy_after_coface()));
    checks.push(Check::from_result("adjointness", Ok(adjointness())));
    checks.push(Check::from_result("sign-after-coface", sign_after_coface(opts)));
    checks
}

fn worked_tree() -> Result<(FnTree, MonotoneMap)> {
    Ok((FnTree::new(3, 3, vec![3, 1, 2], vec![0, 1])?, MonotoneMap::from_digits(9, "2358")?))
}

fn worked_permutation() -> Result<Check> {
    let (lambda, psi) = worked_tree()?;
    let image = psi.apply_to_tree(&lambda)?;
    let got: String = image.sigma().iter().map(|x| x.to_string()).collect();
    let bad = if got == "126783459" { vec![] } else { vec![format!("σ = {got}, expected 126783459")] };
    Ok(Check::exact("worked-example-permutation", 1, &bad))
}

fn worked_twisted() -> Result<Check> {
    let (lambda, psi) = worked_tree()?;
    let got = psi.twisted(&lambda)?.to_string();
    let bad = if got == "2578" {
        vec![]
    } else {
        vec![format!("twisted map = {got}, expected 2578 (the defining formula applied to σ = 126783459 yields {got})")]
    };
    Ok(Check::exact("worked-example-twisted", 1, &bad))
}

fn random_case<R: Rng>(rng: &mut R) -> (usize, usize, usize, FnTree) {
    let m = rng.gen_range(2..=3);
    let n = rng.gen_range(1..=4);
    let ell = rng.gen_range(n..=8);
    (m, n, ell, random_tree(rng, m, n))
}

fn composition_law<R: Rng>(rng: &mut R, samples: usize) -> Result<Check> {
    let mut bad = Vec::new();
    for _ in 0..samples {
        let (_, n, ell, lambda) = random_case(rng);
        let k = rng.gen_range(n..=ell);
        let chi = random_monotone(rng, n, k);
        let psi = random_monotone(rng, k, ell);
        let lhs = psi.compose(&chi)?.twisted(&lambda);
        let rhs = chi.apply_to_tree(&lambda).and_then(|mid| psi.twisted(&mid)).and_then(|a| Ok((a, chi.twisted(&lambda)?))).and_then(|(a, b)| a.compose(&b));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            (l, r) => bad.push(format!("ψ = {psi}, χ = {chi}, Λ = {lambda}: {l:?} vs {r:?}")),
        }
    }
    Ok(Check::exact("composition-law", samples as u64, &bad))
}

fn increasing_endpoints<R: Rng>(rng: &mut R, samples: usize) -> Result<Check> {
    let mut bad = Vec::new();
    for _ in 0..samples {
        let (_, n, ell, lambda) = random_case(rng);
        let psi = random_monotone(rng, n, ell);
        match psi.twisted(&lambda) {
            Ok(t) if t.apply(0) == psi.apply(0) && t.apply(n) == psi.apply(n) => {}
            Ok(t) => bad.push(format!("ψ = {psi}, Λ = {lambda}: endpoints of {t} moved")),
            Err(e) => bad.push(format!("ψ = {psi}, Λ = {lambda}: {e}")),
        }
    }
    Ok(Check::exact("increasing-endpoints", samples as u64, &bad))
}

fn consecutive_jumps<R: Rng>(rng: &mut R, samples: usize) -> Result<Check> {
    let mut bad = Vec::new();
    let mut count = 0;
    for _ in 0..samples {
        let (_, n, ell, lambda) = random_case(rng);
        let psi = random_monotone(rng, n, ell);
        let image = psi.apply_to_tree(&lambda)?;
        let Ok(tw) = psi.twisted(&lambda) else {
            bad.push(format!("ψ = {psi}, Λ = {lambda}: twisted map not monotone"));
            continue;
        };
        let pos = padded_inverse(&image);
        let holds = |f: &MonotoneMap, x: usize, y: usize| f.apply(0) < x && x < y && y <= f.apply(n) && (x..y).all(|z| !f.contains(z));
        for alpha in 1..=ell {
            for beta in 1..=ell {
                if alpha == beta {
                    continue;
                }
                count += 1;
                if holds(&psi, alpha, beta) != holds(&tw, pos[alpha], pos[beta]) {
                    bad.push(format!("ψ = {psi}, Λ = {lambda}, (α, β) = ({alpha}, {beta})"));
                }
            }
        }
    }
    Ok(Check::exact("consecutive-jumps", count, &bad))
}

fn shape_tree<R: Rng>(rng: &mut R, samples: usize) -> Result<Check> {
    let mut bad = Vec::new();
    for _ in 0..samples {
        let (m, n, ell, lambda) = random_case(rng);
        let psi = random_monotone(rng, n, ell);
        let g = psi.apply_to_tree(&lambda)?;
        let top = m - 1;
        let depth = |t: usize| g.depths().get(t.wrapping_sub(1)).copied();
        let pos = padded_inverse(&g);
        let mut ok = (1..=psi.apply(0)).all(|t| g.label_at(t) == t && depth(t).is_none_or(|a| a == top));
        ok &= (psi.apply(n) + 1..=ell).all(|s| g.label_at(s) == s && depth(s - 1).is_none_or(|a| a == top));
        for alpha in psi.apply(0) + 1..psi.apply(n) {
            for beta in alpha + 1..psi.apply(n) {
                if (alpha..beta).all(|z| !psi.contains(z)) {
                    ok &= pos[beta] >= pos[alpha] && pos[beta] - pos[alpha] == beta - alpha;
                    ok &= (pos[alpha]..pos[beta].max(pos[alpha])).all(|t| depth(t) == Some(top));
                }
            }
        }
        if !ok {
            bad.push(format!("ψ = {psi}, Λ = {lambda}, ψΛ = {g}"));
        }
    }
    Ok(Check::exact("shape-tree", samples as u64, &bad))
}

fn all_monotone(n: usize, ell: usize) -> Vec<MonotoneMap> {
    fn rec(start: usize, left: usize, ell: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=ell {
            cur.push(v);
            rec(v + 1, left - 1, ell, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n + 1, ell, &mut Vec::new(), &mut out);
    out.into_iter().map(|v| MonotoneMap::new(ell, v).expect("increasing")).collect()
}

fn degeneracy_after_coface() -> Result<Check> {
    let mut bad = Vec::new();
    let mut count = 0;
    for ell in 1..=6 {
        for n in 0..=ell {
            for phi in all_monotone(n, ell) {
                for u in 0..=ell + 1 {
                    let d_phi = MonotoneMap::coface(ell, u)?.compose(&phi)?;
                    for i in 1..=ell + 1 {
                        for j in i + 1..=ell + 1 {
                            count += 1;
                            let lhs = classify_pair(&d_phi, i, j)?.is_degenerate();
                            let rhs = is_exceptional(u, i, j, ell)?
                                || classify_pair(&phi, codegeneracy_index(u, i), codegeneracy_index(u, j))?.is_degenerate();
                            if lhs != rhs {
                                bad.push(format!("φ = {phi}, u = {u}, ({i}, {j})"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(Check::exact("degeneracy-after-coface", count, &bad))
}

fn adjointness() -> Check {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 0..=8 {
        for u in 0..=n + 1 {
            for p in 0..=n {
                for x in 0..=n + 1 {
                    count += 1;
                    let s = codegeneracy_index(u, x);
                    if (coface_index(u, p) >= x) != (p >= s) || (coface_index(u, p) < x) != (p < s) {
                        bad.push(format!("n = {n}, u = {u}, p = {p}, x = {x}"));
                    }
                }
            }
        }
    }
    Check::exact("adjointness", count, &bad)
}

fn sign_after_coface(opts: &VerifyOptions) -> Result<Check> {
    let mut bad = Vec::new();
    let mut count = 0;
    for m in opts.heights(&[2, 3]) {
        for ell in 1..=opts.n_max.unwrap_or(4) {
            for t in enumerate_trees(m, ell, TREE_CAP)? {
                for u in 0..=ell + 1 {
                    let up = t.coface(u)?;
                    for i in 1..=ell + 1 {
                        for j in i + 1..=ell + 1 {
                            count += 1;
                            let expected = if is_exceptional(u, i, j, ell)? {
                                1
                            } else {
                                t.sgn(codegeneracy_index(u, i), codegeneracy_index(u, j))?
                            };
                            if up.sgn(i, j)? != expected {
                                bad.push(format!("Γ = {t}, u = {u}, ({i}, {j})"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(Check::exact("sign-after-coface", count, &bad))
}
