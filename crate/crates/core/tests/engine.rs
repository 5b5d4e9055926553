//! Cross-module engine checks: chi-reduction of the derived root-vector
//! matrices, certification over a proper field extension (nonzero semisimple
//! part of chi), relation preservation under quotients, and the sharp count
//! of nonvanishing points on a rank-2 sweep.

use parverma::chevalley::ChevalleyBasis;
use parverma::gfield::Field;
use parverma::induce::{
    build_induced, build_levi_simple, compatible_lambdas, fit_c, sweep_certify_seq,
    TheoremStatus,
};
use parverma::linalg::Mat;
use parverma::pbw::PChar;
use parverma::repmod::{maximal_submodule_avoiding, quotient_module};
use parverma::rootsys::{parabolic, RootSystem, Series, Weight};

/// The complement root-vector matrices satisfy the chi-reduction identities:
/// e_beta^p = 0 and f_beta^p = chi(f_beta)^p id.
#[test]
fn complement_matrices_satisfy_chi_reduction() {
    let configs: Vec<(Series, usize, Vec<usize>, Vec<usize>)> = vec![
        (Series::A, 2, vec![0], vec![1]),
        (Series::B, 2, vec![1], vec![0]),
    ];
    for (series, rank, levi_set, chi_j) in configs {
        let rs = RootSystem::build(series, rank).unwrap();
        let field = Field::new(3, 1).unwrap();
        let cb = ChevalleyBasis::build(&rs, &field).unwrap();
        let par = parabolic(&rs, &levi_set).unwrap();
        let chi = PChar::standard_levi(&field, &rs, &chi_j);
        let lam = Weight::new(vec![field.elt(2), field.elt(1)]);
        let levi = build_levi_simple(&cb, &par, &chi, &lam, 0).unwrap();
        let z = build_induced(&cb, &par, &chi, &levi);
        let p = field.p() as u32;
        let ident = Mat::identity(&field, z.module.dim);
        for (slot, &root) in par.complement.iter().enumerate() {
            let ep = z.comp_e[slot].pow(&field, p);
            assert!(ep.is_zero(), "e_beta^p = 0 for beta = {}", rs.display_root(root));
            let fp = z.comp_f[slot].pow(&field, p);
            let cf = field.pow(&chi.f_vals[root], p as u64);
            assert_eq!(
                fp,
                ident.scale(&field, &cf),
                "f_beta^p = chi(f_beta)^p id for beta = {}",
                rs.display_root(root)
            );
        }
    }
}

/// With chi of nonzero semisimple part the engine works over F_{p^p}: the
/// compatible weights are the Artin-Schreier solutions, sweeps certify with
/// no violation, and the closed formula still fits one constant.
#[test]
fn extension_field_certification() {
    let rs = RootSystem::build(Series::A, 1).unwrap();
    let field = Field::new(3, 3).unwrap(); // F_27
    let cb = ChevalleyBasis::build(&rs, &field).unwrap();
    let par = parabolic(&rs, &[]).unwrap();
    let mut chi = PChar::zero(&field, &rs);
    chi.h_vals[0] = field.one();
    let lambdas = compatible_lambdas(&field, &par, &chi);
    assert_eq!(lambdas.len(), 3, "x^3 - x = 1 has p solutions in F_27");
    for lam in &lambdas {
        let v = &lam.values[0];
        assert_eq!(field.sub(&field.pow(v, 3), v), field.one());
        // genuinely outside the prime subfield
        assert!(v.coeffs()[1..].iter().any(|&c| c != 0));
    }
    let certs = sweep_certify_seq(&cb, &par, &chi, 0, 0).unwrap();
    assert_eq!(certs.len(), 3);
    for c in &certs {
        assert_ne!(c.status, TheoremStatus::Violation);
        assert_eq!(c.dim_induced, 3);
    }
    // the scalar is nonzero wherever (lambda+1)^{p-1} != 1, and the fitted
    // constant exists because some point does not vanish
    let c = fit_c(&field, &certs).unwrap();
    assert!(!field.is_zero(&c));
    assert!(certs.iter().any(|c| !field.is_zero(&c.r_direct)));
}

/// Quotients keep the defining matrix relations: chop a reducible induced
/// module and re-run the relation suite on the quotient.
#[test]
fn quotient_preserves_relations() {
    let rs = RootSystem::build(Series::A, 1).unwrap();
    let field = Field::new(3, 1).unwrap();
    let cb = ChevalleyBasis::build(&rs, &field).unwrap();
    let par = parabolic(&rs, &[]).unwrap();
    let chi = PChar::zero(&field, &rs);
    let lam = Weight::new(vec![field.elt(0)]);
    let levi = build_levi_simple(&cb, &par, &chi, &lam, 0).unwrap();
    let z = build_induced(&cb, &par, &chi, &levi);
    z.module.check_relations(&cb, &chi, None).unwrap();
    let k = maximal_submodule_avoiding(&z.module, 0, 0).unwrap();
    assert!(k.rows() > 0, "Z(0) is reducible");
    let (q, _) = quotient_module(&z.module, &k).unwrap();
    q.check_relations(&cb, &chi, None).unwrap();
}

/// The PBW-built rank-1 induced module agrees entry-for-entry with the
/// closed-form matrices: `f f^j v = f^{j+1} v` (wrapping through chi(f)^p at
/// the top), `e f^j v = j(lambda - j + 1) f^{j-1} v`, `h f^j v =
/// (lambda - 2j) f^j v`.
#[test]
fn induced_module_matches_closed_form_sl2_matrices() {
    for (p, chi_f) in [(5u64, 0i64), (5, 1), (3, 2)] {
        let rs = RootSystem::build(Series::A, 1).unwrap();
        let field = Field::new(p, 1).unwrap();
        let cb = ChevalleyBasis::build(&rs, &field).unwrap();
        let par = parabolic(&rs, &[]).unwrap();
        let mut chi = PChar::zero(&field, &rs);
        chi.f_vals[0] = field.elt(chi_f);
        for lam_v in 0..p as i64 {
            let lam = Weight::new(vec![field.elt(lam_v)]);
            let levi = build_levi_simple(&cb, &par, &chi, &lam, 0).unwrap();
            let z = build_induced(&cb, &par, &chi, &levi);
            let dim = p as usize;
            assert_eq!(z.module.dim, dim);
            let mut e = Mat::zeros(&field, dim, dim);
            let mut f = Mat::zeros(&field, dim, dim);
            let mut h = Mat::zeros(&field, dim, dim);
            for j in 0..dim {
                h.set(j, j, &field.elt(lam_v - 2 * j as i64));
                if j + 1 < dim {
                    f.set(j + 1, j, &field.one());
                } else {
                    let wrap = field.pow(&field.elt(chi_f), p);
                    f.set(0, j, &wrap);
                }
                if j > 0 {
                    e.set(j - 1, j, &field.elt(j as i64 * (lam_v - j as i64 + 1)));
                }
            }
            assert_eq!(z.module.e_mats[0], e, "p={p} chi(f)={chi_f} lambda={lam_v}");
            assert_eq!(z.module.f_mats[0], f, "p={p} chi(f)={chi_f} lambda={lam_v}");
            assert_eq!(z.module.h_mats[0], h, "p={p} chi(f)={chi_f} lambda={lam_v}");
        }
    }
}

/// A2, p=3, I = {}, zero chi: nine certificates with the scalar nonzero
/// exactly at lambda = (2,2).
#[test]
fn a2_borel_sweep_unique_nonvanishing_point() {
    let rs = RootSystem::build(Series::A, 2).unwrap();
    let field = Field::new(3, 1).unwrap();
    let cb = ChevalleyBasis::build(&rs, &field).unwrap();
    let par = parabolic(&rs, &[]).unwrap();
    let chi = PChar::zero(&field, &rs);
    let certs = sweep_certify_seq(&cb, &par, &chi, 0, 0).unwrap();
    assert_eq!(certs.len(), 9);
    let nonzero: Vec<Vec<u64>> = certs
        .iter()
        .filter(|c| !field.is_zero(&c.r_direct))
        .map(|c| c.lambda.iter().map(|v| v.coeffs()[0]).collect())
        .collect();
    assert_eq!(nonzero, vec![vec![2, 2]]);
}
