//! Named batch verification suites.
//!
//! Each suite re-runs a family of theorem-level identities at the
//! requested surface signature and returns a structured report; the
//! command-line driver serializes these to JSON. Every check is exact
//! (tolerance zero) and deterministic given the signature and seed.

use crate::chord::{a_map, a_map_combo, cc_bracket, lc_bracket, standard_diagrams, CircularChord};
use crate::error::{AlgebraError, Result};
use crate::expansion::{
    boundary_normalized_cached_full, boundary_target, symplectic_cached,
};
use crate::freegroup::{distinguished_boundary_word, handle_commutator_product, FreeWord, Generator};
use crate::homgoldman::{
    center_member, hg_bracket, ideal_shape_check, HGElement, PairingLattice,
};
use crate::johnson::{hk_basis, morita_trace, trace_cobracket_check};
use crate::necklace::{act_derivation, bracket_necklace, bracket_s, Necklace};
use crate::sig::{BasisSymbol, SurfaceSignature};
use crate::stringops::{delta_alg, kappa_direct, kappa_from_eta, neg_one_aug, rho};
use crate::tensor::{q_int, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Outcome of one named identity check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Outcome of a whole suite at one configuration.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub genus: usize,
    pub boundary_extra: usize,
    pub trunc: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn report_to_json(r: &SuiteReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail}))
        .collect();
    json!({
        "suite": r.suite,
        "genus": r.genus,
        "boundary_extra": r.boundary_extra,
        "trunc": r.trunc,
        "seed": r.seed,
        "pass": r.pass(),
        "checks": checks,
    })
}

pub const SUITES: [&str; 8] = [
    "hopf",
    "expansion",
    "necklace",
    "stringops",
    "johnson",
    "homgoldman",
    "chord",
    "all",
];

/// Runs the named suite. `"all"` concatenates every suite in the order of
/// [`SUITES`].
pub fn run_suite(name: &str, sig: SurfaceSignature, seed: u64) -> Result<SuiteReport> {
    let checks = match name {
        "hopf" => hopf_checks(sig)?,
        "expansion" => expansion_checks(sig)?,
        "necklace" => necklace_checks(sig)?,
        "stringops" => stringops_checks(sig)?,
        "johnson" => johnson_checks(sig)?,
        "homgoldman" => homgoldman_checks(seed)?,
        "chord" => chord_checks()?,
        "all" => {
            let mut out = Vec::new();
            for s in SUITES.iter().take(SUITES.len() - 1) {
                out.extend(run_suite(s, sig, seed)?.checks);
            }
            out
        }
        other => {
            return Err(AlgebraError::Domain(format!(
                "unknown suite {other:?}; expected one of {SUITES:?}"
            )))
        }
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        genus: sig.genus,
        boundary_extra: sig.boundary_extra,
        trunc: sig.trunc,
        seed,
        checks,
    })
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass,
        detail: detail.into(),
    }
}

/// A small non-homogeneous primitive sample: `A1 + [A1, B1]` (needs g >= 1)
/// or `C1` when the surface has no handles.
fn sample_primitive(sig: SurfaceSignature) -> Result<Tensor> {
    if sig.genus >= 1 {
        let a = Tensor::from_symbol(sig, BasisSymbol::A(1))?;
        let b = Tensor::from_symbol(sig, BasisSymbol::B(1))?;
        let comm = a.mul(&b)?.sub(&b.mul(&a)?)?;
        a.add(&comm)
    } else {
        Tensor::from_symbol(sig, BasisSymbol::C(1))
    }
}

fn hopf_checks(sig: SurfaceSignature) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let p = sample_primitive(sig)?;
    let w = Tensor::omega(sig);

    out.push(check(
        "coproduct_multiplicative",
        p.mul(&w)?.coproduct() == p.coproduct().mul(&w.coproduct())?,
        "coproduct(x*y) = coproduct(x)*coproduct(y) on samples",
    ));
    let g = p.exp_t()?;
    out.push(check(
        "antipode_convolution_inverse",
        g.coproduct()
            .map_left(crate::tensor::antipode_word)
            .collapse()
            == Tensor::scalar(sig, g.aug()),
        "m (S x id) coproduct = unit * augmentation on a group-like sample",
    ));
    out.push(check(
        "exp_log_inverse",
        g.log_t()? == p && g.is_group_like(),
        "log(exp(p)) = p and exp(p) is group-like for primitive p",
    ));
    out.push(check(
        "omega_is_primitive",
        w.is_primitive(),
        "the symplectic form is a primitive tensor",
    ));
    Ok(out)
}

fn expansion_checks(sig: SurfaceSignature) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    if sig.boundary_extra == 0 {
        let theta = symplectic_cached(sig)?;
        let zeta = handle_commutator_product(sig.genus);
        out.push(check(
            "boundary_condition",
            theta.log_theta(&zeta)? == Tensor::omega(sig),
            "log theta(zeta) equals the symplectic form exactly",
        ));
        let a1 = theta.log_value(Generator::Alpha(1))?;
        out.push(check(
            "log_values_primitive",
            a1.is_primitive() && theta.eval_theta(&FreeWord::generator(Generator::Alpha(1)))?.is_group_like(),
            "generator images are group-like with primitive logarithms",
        ));
    } else {
        let (theta, conj) = boundary_normalized_cached_full(sig)?;
        let gamma1 = FreeWord::generator(Generator::Gamma(1));
        out.push(check(
            "extra_boundary_exact",
            theta.log_theta(&gamma1)? == Tensor::from_symbol(sig, BasisSymbol::C(1))?,
            "log theta(gamma_1) = C1 exactly",
        ));
        let zeta = distinguished_boundary_word(sig.genus, sig.boundary_extra);
        let lhs = conj
            .neg()
            .exp_t()?
            .mul(&theta.eval_theta(&zeta)?)?
            .mul(&conj.exp_t()?)?;
        out.push(check(
            "normalized_boundary_condition",
            lhs == boundary_target(sig)?.exp_t()?,
            "the conjugated boundary value matches the target exactly",
        ));
    }
    Ok(out)
}

fn small_necklaces(sig: SurfaceSignature) -> Result<Vec<Necklace>> {
    let a = Tensor::from_symbol(sig, BasisSymbol::A(1))?;
    let b = Tensor::from_symbol(sig, BasisSymbol::B(1))?;
    let ab = a.mul(&b)?;
    let aab = a.mul(&ab)?;
    let abb = ab.mul(&b)?;
    Ok(vec![
        Necklace::cyclicized(&ab),
        Necklace::cyclicized(&aab),
        Necklace::cyclicized(&abb),
    ])
}

fn necklace_checks(sig: SurfaceSignature) -> Result<Vec<CheckResult>> {
    let sig = SurfaceSignature::new(sig.genus.max(1), 0, sig.trunc.max(6))?;
    let us = small_necklaces(sig)?;
    let mut anti = true;
    let mut surgery = true;
    let mut jacobi = true;
    let mut oracle = true;
    for u in &us {
        for v in &us {
            let b = bracket_necklace(u, v)?;
            anti &= b.value() == &bracket_necklace(v, u)?.neg().value().clone();
            surgery &= b.value() == bracket_s(u, v)?.value();
            // derivation-commutator oracle on the symplectic form
            let w = Tensor::omega(sig);
            let uv = act_derivation(u, &act_derivation(v, &w)?)?
                .sub(&act_derivation(v, &act_derivation(u, &w)?)?)?;
            oracle &= act_derivation(&b, &w)? == uv.truncate_degree(sig.trunc);
        }
    }
    for x in &us {
        for y in &us {
            for z in &us {
                let j = bracket_necklace(&bracket_necklace(x, y)?, z)?
                    .add(&bracket_necklace(&bracket_necklace(y, z)?, x)?)?
                    .add(&bracket_necklace(&bracket_necklace(z, x)?, y)?)?;
                jacobi &= j.is_zero();
            }
        }
    }
    Ok(vec![
        check("bracket_antisymmetry", anti, "[u,v] = -[v,u] on cyclic words"),
        check("bracket_surgery_agrees", surgery, "double-sum and surgery forms of the bracket agree"),
        check("bracket_jacobi", jacobi, "Jacobi identity on cyclic-word samples"),
        check(
            "bracket_derivation_commutator",
            oracle,
            "[u,v] acts as the commutator of derivations (within truncation)",
        ),
    ])
}

fn stringops_checks(sig: SurfaceSignature) -> Result<Vec<CheckResult>> {
    let sig = SurfaceSignature::new(sig.genus.max(1), 0, sig.trunc.clamp(4, 6))?;
    let mut out = Vec::new();
    let mut eta_ok = true;
    for x in sig.symbols() {
        for y in sig.symbols() {
            let xt = Tensor::from_symbol(sig, x)?;
            let yt = Tensor::from_symbol(sig, y)?;
            eta_ok &= kappa_from_eta(&xt, &yt)? == kappa_direct(&xt, &yt)?;
        }
    }
    out.push(check(
        "kappa_two_routes_agree",
        eta_ok,
        "homotopy-intersection route equals the closed form on all symbol pairs",
    ));
    let a = Tensor::from_symbol(sig, BasisSymbol::A(1))?;
    let b = Tensor::from_symbol(sig, BasisSymbol::B(1))?;
    out.push(check(
        "kappa_projects_to_rho",
        neg_one_aug(&kappa_direct(&a, &b)?) == rho(&a, &b)?,
        "(-1 x aug) kappa = rho",
    ));
    let u = Necklace::cyclicized(&a.mul(&a)?.mul(&b)?);
    let d = delta_alg(&u)?;
    out.push(check(
        "cobracket_coantisymmetry",
        d.swap() == d.scale(&-q_int(1)),
        "the cobracket is co-antisymmetric",
    ));
    let rotated = Necklace::cyclicized(&a.mul(&b)?.mul(&a)?);
    out.push(check(
        "cobracket_rotation_independent",
        delta_alg(&rotated)? == d,
        "the cobracket only sees the cyclic word",
    ));
    Ok(out)
}

fn johnson_checks(sig: SurfaceSignature) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let g = sig.genus.max(1);
    let d = sig.trunc.max(5);
    let hsig = SurfaceSignature::new(g, 0, d)?;
    let h1 = hk_basis(hsig, 1)?;
    let n = 2 * g;
    let expected = n * (n - 1) * (n - 2) / 6;
    out.push(check(
        "h1_dimension",
        h1.basis.len() == expected,
        format!("dim h(1) = C(2g,3) = {expected}"),
    ));
    if d >= 4 {
        let h2 = hk_basis(hsig, 2)?;
        let tr2_zero = h2
            .basis
            .iter()
            .all(|u| morita_trace(&h2, u).map(|t| t.is_zero()).unwrap_or(false));
        out.push(check("trace_vanishes_even_degree", tr2_zero, "Tr_2 = 0"));
    }
    for k in 3..=5 {
        if k + 2 > d {
            break;
        }
        let r = trace_cobracket_check(SurfaceSignature::new(g, 0, k + 2)?, k)?;
        out.push(check(
            &format!("trace_cobracket_k{k}"),
            r.pass,
            format!("symmetrized cobracket = (-k) trace at k = {k}"),
        ));
    }
    Ok(out)
}

fn homgoldman_checks(seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jacobi = true;
    let mut anti = true;
    for _ in 0..60 {
        let rank = rng.gen_range(2..=4usize);
        let mut m = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..i {
                let e = rng.gen_range(-4..=4i64);
                m[i][j] = e;
                m[j][i] = -e;
            }
        }
        let lat = PairingLattice::new(m)?;
        let rand_elt = |rng: &mut ChaCha8Rng| {
            let mut u = HGElement::zero(rank);
            for _ in 0..2 {
                let x: Vec<i64> = (0..rank).map(|_| rng.gen_range(-3..=3)).collect();
                u.add_term(x, q_int(rng.gen_range(-3..=3)));
            }
            u
        };
        let (x, y, z) = (rand_elt(&mut rng), rand_elt(&mut rng), rand_elt(&mut rng));
        anti &= hg_bracket(&lat, &x, &y)? == hg_bracket(&lat, &y, &x)?.neg();
        let j = hg_bracket(&lat, &hg_bracket(&lat, &x, &y)?, &z)?
            .add(&hg_bracket(&lat, &hg_bracket(&lat, &y, &z)?, &x)?)?
            .add(&hg_bracket(&lat, &hg_bracket(&lat, &z, &x)?, &y)?)?;
        jacobi &= j.is_zero();
    }
    let mut out = vec![
        check("hg_antisymmetry", anti, "[x,y] = -[y,x] on seeded samples"),
        check("hg_jacobi", jacobi, "Jacobi identity on seeded samples"),
    ];
    // center = classes supported on the kernel of the pairing
    let lat = PairingLattice::new(vec![vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]])?;
    let center_ok = center_member(&lat, &HGElement::basis(vec![0, 0, 2]))
        && !center_member(&lat, &HGElement::basis(vec![1, 0, 0]));
    out.push(check(
        "hg_center_is_kernel_span",
        center_ok,
        "central classes are exactly those supported on Ker(mu)",
    ));
    let sp = PairingLattice::symplectic(2);
    let derived_ok = ideal_shape_check(&sp, &[], &[HGElement::basis(vec![0; 4])])?;
    out.push(check(
        "hg_derived_ideal_shape",
        derived_ok,
        "the derived ideal has the classified shape (V0 = 0, V = Q[0])",
    ));
    Ok(out)
}

fn chord_checks() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let dims_ok = [(1usize, 1usize), (2, 3), (3, 15), (4, 105)]
        .iter()
        .all(|&(m, d)| standard_diagrams(m).len() == d);
    out.push(check(
        "diagram_dimension_double_factorial",
        dims_ok,
        "(2m-1)!! standard diagrams for m <= 4",
    ));
    let sig = SurfaceSignature::new(1, 0, 6)?;
    let mut hom_ok = true;
    for (m, l) in [(1usize, 1usize), (1, 2), (2, 1)] {
        for c in standard_diagrams(m) {
            for cp in standard_diagrams(l) {
                let lhs = a_map_combo(&lc_bracket(&c, &cp)?, sig)?;
                let rhs = a_map(&c, sig)?.der_bracket(&a_map(&cp, sig)?)?;
                hom_ok &= lhs == rhs;
            }
        }
    }
    out.push(check(
        "a_map_bracket_homomorphism",
        hom_ok,
        "the tensor map intertwines diagram and derivation brackets",
    ));
    let c1 = crate::chord::lc_normalize(&[(1, 2)])?;
    out.push(check(
        "single_chord_invariant_vanishes",
        CircularChord::close(&c1).is_zero(),
        "the closed one-chord diagram is zero",
    ));
    let omega2 = CircularChord::omega(2);
    let central = standard_diagrams(2)
        .iter()
        .chain(standard_diagrams(3).iter())
        .map(CircularChord::close)
        .filter(|d| !d.is_zero())
        .try_fold(true, |acc, d| -> Result<bool> {
            Ok(acc && cc_bracket(&omega2, &d)?.is_zero())
        })?;
    out.push(check(
        "omega2_central",
        central,
        "the closed double form commutes with all small circular diagrams",
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_default_config() {
        let sig = SurfaceSignature::new(2, 0, 5).unwrap();
        let report = run_suite("all", sig, 17).unwrap();
        for c in &report.checks {
            assert!(c.pass, "check {} failed", c.name);
        }
        assert!(report.pass());
        assert!(report.checks.len() >= 20);
    }

    #[test]
    fn expansion_suite_with_extra_boundary() {
        let sig = SurfaceSignature::new(1, 1, 4).unwrap();
        let report = run_suite("expansion", sig, 0).unwrap();
        assert!(report.pass());
    }

    #[test]
    fn unknown_suite_rejected() {
        let sig = SurfaceSignature::new(1, 0, 4).unwrap();
        assert!(matches!(
            run_suite("nope", sig, 0),
            Err(AlgebraError::Domain(_))
        ));
    }

    #[test]
    fn reports_serialize_deterministically() {
        let sig = SurfaceSignature::new(1, 0, 5).unwrap();
        let a = report_to_json(&run_suite("chord", sig, 3).unwrap());
        let b = report_to_json(&run_suite("chord", sig, 3).unwrap());
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
