//! Construction of the parabolically induced modules, the simplicity scalar
//! computed two independent ways, and the certification pipeline.
//!
//! The Levi-simple module is realized as the simple head of the Levi's own
//! induced module (a baby Verma over the Levi), with the nilradical acting
//! as zero. The induced module's action matrices come from PBW normal forms
//! of `x * f_{beta_1}^{l_1} ... f_{beta_k}^{l_k}`: the complement f-part of
//! each monomial re-indexes the basis and the remaining parabolic part acts
//! on the Levi head through its matrices.

use crate::chevalley::{ChevalleyBasis, Gen};
use crate::gfield::{Field, FieldElement};
use crate::linalg::{unit_vector, vec_entry, vec_is_zero, vec_set_entry, Mat};
use crate::pbw::{GenOrder, PBWElement, PChar, PbwEngine};
use crate::repmod::{
    all_root_matrices, maximal_submodule_avoiding, norton_test, quotient_module,
    MatrixModule, ModuleError, SimplicityVerdict, Verdict,
};
use crate::rootsys::{pair_lambda_rho, ParabolicData, Weight};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

/// Largest module dimension the engine will materialize. Dense matrices of
/// this size are the practical desk-scale ceiling.
pub const MAX_MODULE_DIM: usize = 5_000;

#[derive(Debug, Error)]
pub enum InduceError {
    #[error("weight incompatible with chi at simple coroot {0}: lambda^p - lambda != chi(h)^p")]
    IncompatibleWeight(usize),
    #[error("E*F did not act as a scalar on the maximal vector (engine bug): {0}")]
    NotScalarMultiple(String),
    #[error("module dimension {0} exceeds the supported bound {MAX_MODULE_DIM}")]
    DimensionTooLarge(usize),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FitError {
    #[error("no lambda in the sweep has nonvanishing scalar")]
    NoNonvanishingPoint,
    #[error("closed-formula consistency violated: {0}")]
    Inconsistent(String),
}

/// The simple head of the Levi baby Verma, extended to the parabolic by zero
/// action of the nilradical.
#[derive(Debug, Clone)]
pub struct LeviSimple {
    pub module: MatrixModule,
    /// Action matrices per root of `Phi_I^+` (same order as `par.phi_i_plus`).
    pub levi_e: Vec<Mat>,
    pub levi_f: Vec<Mat>,
    pub lambda: Weight,
    /// Index of the maximal vector in the module basis (always 0 after the
    /// construction's final base change).
    pub maximal_index: usize,
}

/// `Z_I^chi(lambda)` with its bookkeeping: basis `f^l (x) v_j` indexed by
/// `lidx * dim_levi + j`, where `lidx` runs over exponent tuples on the
/// complement roots in lexicographic order (first coordinate major).
#[derive(Debug)]
pub struct InducedModule {
    pub module: MatrixModule,
    pub levi: LeviSimple,
    pub par: ParabolicData,
    pub chi: PChar,
    /// Matrices of the complement-root vectors on Z, built by bracketing
    /// simple action matrices with exact structure constants.
    pub comp_e: Vec<Mat>,
    pub comp_f: Vec<Mat>,
    pub k: usize,
    pub maximal_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremStatus {
    Confirmed,
    NoClaim,
    Violation,
}

impl TheoremStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremStatus::Confirmed => "confirmed",
            TheoremStatus::NoClaim => "no_claim",
            TheoremStatus::Violation => "violation",
        }
    }
}

/// One record of a certification run.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub lambda: Vec<FieldElement>,
    pub r_direct: FieldElement,
    pub r_factors: Vec<FieldElement>,
    pub simple: bool,
    pub witness: Option<Mat>,
    pub status: TheoremStatus,
    pub dim_levi: usize,
    pub dim_induced: usize,
    pub k: usize,
    pub norton_seed: u64,
    pub chop_seed: u64,
}

fn simple_root_index(par: &ParabolicData, i: usize) -> usize {
    let mut c = vec![0i64; par.rs.rank];
    c[i] = 1;
    par.rs.root_index(&c).expect("simple root")
}

/// Compatibility of lambda with chi: `lambda(h_i)^p - lambda(h_i) = chi(h_i)^p`
/// for every simple coroot, the condition for the one-dimensional Borel
/// module to exist.
pub fn weight_compatible(field: &Field, chi: &PChar, lambda: &Weight) -> Result<(), InduceError> {
    let p = field.p();
    for (i, v) in lambda.values.iter().enumerate() {
        let lhs = field.sub(&field.pow(v, p), v);
        let rhs = field.pow(&chi.h_vals[i], p);
        if lhs != rhs {
            return Err(InduceError::IncompatibleWeight(i + 1));
        }
    }
    Ok(())
}

/// `base * p^k` with the desk-scale ceiling enforced.
fn checked_dim(p: u64, k: usize, base: usize) -> Result<usize, InduceError> {
    let mut acc = base;
    for _ in 0..k {
        acc = acc
            .checked_mul(p as usize)
            .ok_or(InduceError::DimensionTooLarge(usize::MAX))?;
        if acc > MAX_MODULE_DIM {
            return Err(InduceError::DimensionTooLarge(acc));
        }
    }
    Ok(acc)
}

/// Odometer over exponent tuples `0..p-1` per slot, first slot major.
fn tuple_index(p: usize, tuple: &[u8]) -> usize {
    tuple.iter().fold(0usize, |acc, &t| acc * p + t as usize)
}

fn index_tuple(p: usize, slots: usize, mut idx: usize) -> Vec<u8> {
    let mut tuple = vec![0u8; slots];
    for slot in tuple.iter_mut().rev() {
        *slot = (idx % p) as u8;
        idx /= p;
    }
    tuple
}

/// Applies the parabolic part of a normal-form monomial to the Levi head:
/// the (levi-f, h, levi-e) factors as a single `dim_L x dim_L` matrix,
/// rightmost factor first. Complement e-exponents kill the module.
fn parabolic_operator(
    levi: &LeviSimple,
    par: &ParabolicData,
    order: &GenOrder,
    mono: &crate::pbw::PBWMonomial,
) -> Option<Mat> {
    let field = &levi.module.field;
    let k = par.k();
    // any complement e kills L (nilradical acts as zero)
    for (pos, &exp) in mono.e.iter().enumerate() {
        if exp > 0 && !par.in_levi(order.e_seq()[pos]) {
            return None;
        }
    }
    let mut op = Mat::identity(field, levi.module.dim);
    // written order is f-block, h-block, e-block: apply right-to-left
    for (pos, &exp) in mono.e.iter().enumerate().rev() {
        if exp == 0 {
            continue;
        }
        let root = order.e_seq()[pos];
        let slot = par.phi_i_plus.iter().position(|&r| r == root).unwrap();
        for _ in 0..exp {
            op = levi.levi_e[slot].mul(field, &op);
        }
    }
    for (i, &exp) in mono.h.iter().enumerate().rev() {
        for _ in 0..exp {
            op = levi.module.h_mats[i].mul(field, &op);
        }
    }
    for (pos, &exp) in mono.f.iter().enumerate().rev() {
        if exp == 0 {
            continue;
        }
        let root = order.f_seq()[pos];
        if pos < k {
            unreachable!("complement f-part is split off before this point");
        }
        let slot = par.phi_i_plus.iter().position(|&r| r == root).unwrap();
        for _ in 0..exp {
            op = levi.levi_f[slot].mul(field, &op);
        }
    }
    Some(op)
}

/// Builds the Levi's own induced module (baby Verma over the Levi) on the
/// monomial basis `f^a (x) 1`, `a` over `Phi_I^+`.
fn build_levi_verma(
    engine: &PbwEngine,
    par: &ParabolicData,
    lambda: &Weight,
) -> (MatrixModule, Vec<Mat>, Vec<Mat>) {
    let field = engine.field();
    let rs = &par.rs;
    let p = field.p() as usize;
    let s = par.phi_i_plus.len();
    let k = par.k();
    let dim = p.pow(s as u32);
    let l = rs.rank;

    // scalar action of h^b e^c on the highest-weight line
    let highest_scalar = |mono: &crate::pbw::PBWMonomial| -> Option<FieldElement> {
        if mono.e.iter().any(|&c| c > 0) {
            return None;
        }
        let mut acc = field.one();
        for (i, &b) in mono.h.iter().enumerate() {
            for _ in 0..b {
                acc = field.mul(&acc, &lambda.values[i]);
            }
        }
        Some(acc)
    };

    let action_of = |g: Gen| -> Mat {
        let mut mat = Mat::zeros(field, dim, dim);
        for col in 0..dim {
            let a = index_tuple(p, s, col);
            let mut word = vec![g];
            for (slot, &root) in par.phi_i_plus.iter().enumerate() {
                for _ in 0..a[slot] {
                    word.push(Gen::F(root));
                }
            }
            let nf = engine.normal_form_word(&field.one(), &word);
            for (mono, coeff) in &nf.terms {
                debug_assert!(mono.f[..k].iter().all(|&x| x == 0), "Levi words stay in the Levi");
                let Some(scalar) = highest_scalar(mono) else { continue };
                let mut a_new = vec![0u8; s];
                for (pos, &exp) in mono.f.iter().enumerate().skip(k) {
                    if exp > 0 {
                        let root = engine.order.f_seq()[pos];
                        let slot = par.phi_i_plus.iter().position(|&r| r == root).unwrap();
                        a_new[slot] = exp;
                    }
                }
                let row = tuple_index(p, &a_new);
                let val = field.mul(coeff, &scalar);
                let cur = mat.get(row, col);
                mat.set(row, col, &field.add(&cur, &val));
            }
        }
        mat
    };

    let mut e_mats = Vec::with_capacity(l);
    let mut f_mats = Vec::with_capacity(l);
    for i in 0..l {
        if par.levi.contains(&i) {
            let r = simple_root_index(par, i);
            e_mats.push(action_of(Gen::E(r)));
            f_mats.push(action_of(Gen::F(r)));
        } else {
            e_mats.push(Mat::zeros(field, dim, dim));
            f_mats.push(Mat::zeros(field, dim, dim));
        }
    }
    let h_mats: Vec<Mat> = (0..l).map(|i| action_of(Gen::H(i))).collect();
    let levi_e: Vec<Mat> = par.phi_i_plus.iter().map(|&r| action_of(Gen::E(r))).collect();
    let levi_f: Vec<Mat> = par.phi_i_plus.iter().map(|&r| action_of(Gen::F(r))).collect();

    let mut module = MatrixModule {
        field: field.clone(),
        dim,
        rank: l,
        e_mats,
        f_mats,
        h_mats,
        labels: None,
        distinguished: Some(0),
    };
    module.relabel_from_cartan();
    (module, levi_e, levi_f)
}

/// Base change putting `first` (nonzero) at index 0, completed greedily by
/// unit vectors.
fn rebase_first(field: &Field, module: &MatrixModule, extra: &mut [&mut Mat], first: &[u64]) -> MatrixModule {
    let dim = module.dim;
    let mut cols: Vec<Vec<u64>> = vec![first.to_vec()];
    let mut space = crate::linalg::EchelonSpace::new(field, dim);
    space.insert(field, first);
    for j in 0..dim {
        if cols.len() == dim {
            break;
        }
        let u = unit_vector(field, dim, j);
        if space.insert(field, &u) {
            cols.push(u);
        }
    }
    let mut p_mat = Mat::zeros(field, dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..dim {
            p_mat.set(i, j, &vec_entry(field, col, i));
        }
    }
    let p_inv = p_mat.inverse(field).expect("basis change is invertible");
    let conj = |m: &Mat| p_inv.mul(field, &m.mul(field, &p_mat));
    let mut out = MatrixModule {
        field: field.clone(),
        dim,
        rank: module.rank,
        e_mats: module.e_mats.iter().map(&conj).collect(),
        f_mats: module.f_mats.iter().map(&conj).collect(),
        h_mats: module.h_mats.iter().map(&conj).collect(),
        labels: None,
        distinguished: Some(0),
    };
    for m in extra.iter_mut() {
        **m = conj(m);
    }
    out.relabel_from_cartan();
    out
}

/// Builds `L_I^chi(lambda)`: Levi baby Verma, simple quotient by a maximal
/// submodule avoiding the generator, zero action of the nilradical.
pub fn build_levi_simple(
    cb: &ChevalleyBasis,
    par: &ParabolicData,
    chi: &PChar,
    lambda: &Weight,
    chop_seed: u64,
) -> Result<LeviSimple, InduceError> {
    let field = &cb.field;
    weight_compatible(field, chi, lambda)?;
    checked_dim(field.p(), par.phi_i_plus.len(), 1)?;
    let engine = PbwEngine::new(cb, GenOrder::for_parabolic(par), chi.clone());
    let (verma, mut levi_e, mut levi_f) = build_levi_verma(&engine, par, lambda);
    let kernel = maximal_submodule_avoiding(&verma, 0, chop_seed)?;
    let (quot, map) = quotient_module(&verma, &kernel)?;
    let mut levi_e_q: Vec<Mat> = levi_e.drain(..).map(|m| map.transform(field, &m)).collect();
    let mut levi_f_q: Vec<Mat> = levi_f.drain(..).map(|m| map.transform(field, &m)).collect();
    let gen_image = map.project(field, &unit_vector(field, verma.dim, 0));
    debug_assert!(!vec_is_zero(&gen_image));
    let mut extras: Vec<&mut Mat> = levi_e_q.iter_mut().chain(levi_f_q.iter_mut()).collect();
    let module = rebase_first(field, &quot, &mut extras, &gen_image);

    let levi = LeviSimple {
        module,
        levi_e: levi_e_q,
        levi_f: levi_f_q,
        lambda: lambda.clone(),
        maximal_index: 0,
    };
    // construction invariants: the head is simple, the maximal vector is
    // killed by the Levi raising operators and weighted by lambda
    debug_assert!(norton_test(&levi.module, chop_seed).is_simple());
    let v0 = unit_vector(field, levi.module.dim, 0);
    for e in &levi.levi_e {
        assert!(vec_is_zero(&e.matvec(field, &v0)), "maximal vector not killed");
    }
    for (i, h) in levi.module.h_mats.iter().enumerate() {
        let img = h.matvec(field, &v0);
        let mut expect = vec![0u64; v0.len()];
        vec_set_entry(field, &mut expect, 0, &lambda.values[i]);
        assert_eq!(img, expect, "maximal vector weight mismatch at h_{i}");
    }
    Ok(levi)
}

/// Builds `Z_I^chi(lambda) = u_chi(g) (x)_{u_chi(p_I)} L` on the monomial
/// basis `f^l (x) v_j` over the complement roots.
pub fn build_induced(
    cb: &ChevalleyBasis,
    par: &ParabolicData,
    chi: &PChar,
    levi: &LeviSimple,
) -> InducedModule {
    let field = &cb.field;
    let engine = PbwEngine::new(cb, GenOrder::for_parabolic(par), chi.clone());
    let p = field.p() as usize;
    let k = par.k();
    let n_l = levi.module.dim;
    let blocks = p.pow(k as u32);
    let dim = blocks * n_l;
    let l = par.rs.rank;

    let action_of = |g: Gen| -> Mat {
        let mut mat = Mat::zeros(field, dim, dim);
        for lidx in 0..blocks {
            let tuple = index_tuple(p, k, lidx);
            let mut word = vec![g];
            for (slot, &root) in par.complement.iter().enumerate() {
                for _ in 0..tuple[slot] {
                    word.push(Gen::F(root));
                }
            }
            let nf = engine.normal_form_word(&field.one(), &word);
            for (mono, coeff) in &nf.terms {
                let Some(op) = parabolic_operator_split(levi, par, &engine.order, mono) else {
                    continue;
                };
                let (comp_exps, op) = op;
                let row_block = tuple_index(p, &comp_exps);
                for j in 0..n_l {
                    let col = lidx * n_l + j;
                    for i in 0..n_l {
                        let v = op.get(i, j);
                        if field.is_zero(&v) {
                            continue;
                        }
                        let row = row_block * n_l + i;
                        let cur = mat.get(row, col);
                        mat.set(row, col, &field.add(&cur, &field.mul(coeff, &v)));
                    }
                }
            }
        }
        mat
    };

    let mut e_mats = Vec::with_capacity(l);
    let mut f_mats = Vec::with_capacity(l);
    for i in 0..l {
        let r = simple_root_index(par, i);
        e_mats.push(action_of(Gen::E(r)));
        f_mats.push(action_of(Gen::F(r)));
    }
    let h_mats: Vec<Mat> = (0..l).map(|i| action_of(Gen::H(i))).collect();

    let mut module = MatrixModule {
        field: field.clone(),
        dim,
        rank: l,
        e_mats,
        f_mats,
        h_mats,
        labels: None,
        distinguished: Some(0),
    };
    module.relabel_from_cartan();
    let (e_all, f_all) = all_root_matrices(&module, cb);
    let comp_e: Vec<Mat> = par.complement.iter().map(|&r| e_all[r].clone()).collect();
    let comp_f: Vec<Mat> = par.complement.iter().map(|&r| f_all[r].clone()).collect();
    InducedModule {
        module,
        levi: levi.clone(),
        par: par.clone(),
        chi: chi.clone(),
        comp_e,
        comp_f,
        k,
        maximal_index: 0,
    }
}

/// Monomial splitter: complement f-exponents plus the parabolic-part
/// operator on L (None when a complement e kills the term).
fn parabolic_operator_split(
    levi: &LeviSimple,
    par: &ParabolicData,
    order: &GenOrder,
    mono: &crate::pbw::PBWMonomial,
) -> Option<(Vec<u8>, Mat)> {
    let k = par.k();
    let comp_exps: Vec<u8> = mono.f[..k].to_vec();
    let mut rest = mono.clone();
    for slot in rest.f[..k].iter_mut() {
        *slot = 0;
    }
    let op = parabolic_operator(levi, par, order, &rest)?;
    Some((comp_exps, op))
}

impl InducedModule {
    pub fn field(&self) -> &Field {
        &self.module.field
    }

    /// Applies `F = f_{beta_1}^{p-1} ... f_{beta_k}^{p-1}` then
    /// `E = e_{beta_1}^{p-1} ... e_{beta_k}^{p-1}` to a vector, rightmost
    /// factor first.
    pub fn apply_ef(&self, v: &[u64]) -> Vec<u64> {
        let field = self.field();
        let reps = field.p() as usize - 1;
        let mut w = v.to_vec();
        for mat in self.comp_f.iter().rev() {
            for _ in 0..reps {
                w = mat.matvec(field, &w);
            }
        }
        for mat in self.comp_e.iter().rev() {
            for _ in 0..reps {
                w = mat.matvec(field, &w);
            }
        }
        w
    }
}

/// The scalar by which `E*F` acts on the maximal vector, by direct matrix
/// action. A non-collinear result contradicts the uniqueness lemma and
/// aborts as an engine bug.
pub fn compute_r_direct(z: &InducedModule) -> Result<FieldElement, InduceError> {
    let field = z.field();
    let w = unit_vector(field, z.module.dim, z.maximal_index);
    let img = z.apply_ef(&w);
    let r = vec_entry(field, &img, z.maximal_index);
    let mut expected = vec![0u64; w.len()];
    vec_set_entry(field, &mut expected, z.maximal_index, &r);
    if img != expected {
        return Err(InduceError::NotScalarMultiple(format!(
            "E*F image has support outside the maximal line (lambda = {:?})",
            z.levi
                .lambda
                .values
                .iter()
                .map(|v| field.display(v))
                .collect::<Vec<_>>()
        )));
    }
    Ok(r)
}

/// The `k` factors `(lambda+rho)(h_{beta_i})^{p-1} - 1` of the closed
/// product formula.
pub fn compute_r_factors(field: &Field, par: &ParabolicData, lambda: &Weight) -> Vec<FieldElement> {
    let p = field.p();
    par.complement
        .iter()
        .map(|&beta| {
            let pairing = pair_lambda_rho(field, &par.rs, lambda, beta);
            field.sub(&field.pow(&pairing, p - 1), &field.one())
        })
        .collect()
}

/// Fits the lambda-independent constant `c` with `R = c * prod(factors)`:
/// the ratio at every nonvanishing point, which must be one nonzero value,
/// with vanishing-locus equality asserted at every point.
pub fn fit_c(field: &Field, certs: &[Certificate]) -> Result<FieldElement, FitError> {
    let mut c: Option<FieldElement> = None;
    for cert in certs {
        let mut prod = field.one();
        for f in &cert.r_factors {
            prod = field.mul(&prod, f);
        }
        let r_zero = field.is_zero(&cert.r_direct);
        if r_zero != field.is_zero(&prod) {
            return Err(FitError::Inconsistent(format!(
                "vanishing mismatch at lambda = {:?}: R_direct {} but product {}",
                cert.lambda.iter().map(|v| field.display(v)).collect::<Vec<_>>(),
                field.display(&cert.r_direct),
                field.display(&prod),
            )));
        }
        if r_zero {
            continue;
        }
        let ratio = field.div(&cert.r_direct, &prod).expect("product nonzero");
        match &c {
            None => c = Some(ratio),
            Some(prev) => {
                if *prev != ratio {
                    return Err(FitError::Inconsistent(format!(
                        "ratio {} differs from earlier {}",
                        field.display(&ratio),
                        field.display(prev),
                    )));
                }
            }
        }
    }
    c.ok_or(FitError::NoNonvanishingPoint)
}

/// Certifies one weight: builds L and Z, computes the scalar both ways,
/// runs the simplicity test, and classifies against the sufficiency theorem.
pub fn certify(
    cb: &ChevalleyBasis,
    par: &ParabolicData,
    chi: &PChar,
    lambda: &Weight,
    norton_seed: u64,
    chop_seed: u64,
) -> Result<Certificate, InduceError> {
    let field = &cb.field;
    let levi = build_levi_simple(cb, par, chi, lambda, chop_seed)?;
    let expected_dim = checked_dim(field.p(), par.k(), levi.module.dim)?;
    let z = build_induced(cb, par, chi, &levi);
    assert_eq!(z.module.dim, expected_dim, "dim Z = p^k * dim L");
    z.module
        .check_relations(cb, chi, Some(40))
        .map_err(InduceError::Module)?;
    let r_direct = compute_r_direct(&z)?;
    let r_factors = compute_r_factors(field, par, lambda);
    let SimplicityVerdict { verdict, witness, .. } = norton_test(&z.module, norton_seed);
    let simple = verdict == Verdict::Simple;
    let status = if field.is_zero(&r_direct) {
        TheoremStatus::NoClaim
    } else if simple {
        TheoremStatus::Confirmed
    } else {
        TheoremStatus::Violation
    };
    Ok(Certificate {
        lambda: lambda.values.clone(),
        r_direct,
        r_factors,
        simple,
        witness,
        status,
        dim_levi: levi.module.dim,
        dim_induced: z.module.dim,
        k: par.k(),
        norton_seed,
        chop_seed,
    })
}

/// All weights compatible with chi whose coordinates solve
/// `x^p - x = chi(h_i)^p`, in lexicographic order (first coordinate major).
/// With semisimple part zero these are exactly the restricted weights.
pub fn compatible_lambdas(field: &Field, par: &ParabolicData, chi: &PChar) -> Vec<Weight> {
    let p = field.p();
    let l = par.rs.rank;
    let mut per_coord: Vec<Vec<FieldElement>> = Vec::with_capacity(l);
    for i in 0..l {
        let rhs = field.pow(&chi.h_vals[i], p);
        let sols: Vec<FieldElement> = field
            .all_elements()
            .filter(|x| field.sub(&field.pow(x, p), x) == rhs)
            .collect();
        if sols.is_empty() {
            return Vec::new();
        }
        per_coord.push(sols);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; l];
    loop {
        let values: Vec<FieldElement> = (0..l).map(|i| per_coord[i][idx[i]].clone()).collect();
        out.push(Weight::new(values));
        let mut carry = true;
        for i in (0..l).rev() {
            idx[i] += 1;
            if idx[i] < per_coord[i].len() {
                carry = false;
                break;
            }
            idx[i] = 0;
        }
        if carry {
            break;
        }
    }
    out
}

/// Certifies every compatible restricted weight; results in lambda-lex order.
/// Fans out over worker threads when the `parallel` feature is enabled.
pub fn sweep_certify(
    cb: &ChevalleyBasis,
    par: &ParabolicData,
    chi: &PChar,
    norton_seed: u64,
    chop_seed: u64,
) -> Result<Vec<Certificate>, InduceError> {
    let lambdas = compatible_lambdas(&cb.field, par, chi);
    #[cfg(feature = "parallel")]
    {
        lambdas
            .par_iter()
            .map(|lam| certify(cb, par, chi, lam, norton_seed, chop_seed))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sweep_certify_seq(cb, par, chi, norton_seed, chop_seed)
    }
}

/// Sequential sweep, always available; the benchmark baseline.
pub fn sweep_certify_seq(
    cb: &ChevalleyBasis,
    par: &ParabolicData,
    chi: &PChar,
    norton_seed: u64,
    chop_seed: u64,
) -> Result<Vec<Certificate>, InduceError> {
    compatible_lambdas(&cb.field, par, chi)
        .iter()
        .map(|lam| certify(cb, par, chi, lam, norton_seed, chop_seed))
        .collect()
}

/// True when compiled with the rayon-backed parallel sweep.
pub const fn has_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Operator vanishing (top-power annihilation): the matrix of
/// `E = e_{beta_1}^{p-1} ... e_{beta_k}^{p-1}` kills every basis vector
/// `f^l (x) v` with some `l_i < p-1`.
pub fn check_operator_vanishing(z: &InducedModule) -> Result<(), String> {
    let field = z.field();
    let p = field.p() as usize;
    let reps = p - 1;
    let mut e_op = Mat::identity(field, z.module.dim);
    for mat in z.comp_e.iter() {
        for _ in 0..reps {
            e_op = e_op.mul(field, mat);
        }
    }
    let n_l = z.levi.module.dim;
    let blocks = p.pow(z.k as u32);
    let top = blocks - 1;
    for lidx in 0..blocks {
        if lidx == top {
            continue;
        }
        for j in 0..n_l {
            let col = lidx * n_l + j;
            let img = e_op.matvec(field, &unit_vector(field, z.module.dim, col));
            if !vec_is_zero(&img) {
                return Err(format!(
                    "E did not kill f^{:?} (x) v_{j}",
                    index_tuple(p, z.k, lidx)
                ));
            }
        }
    }
    Ok(())
}

/// Commutation through the top operator: for `alpha` in `I`,
/// `e_alpha (E F (x) v) = E F (x) (e_alpha v)` and likewise for `f_alpha`,
/// on a spanning set of L.
pub fn check_commutation_through_ef(z: &InducedModule) -> Result<(), String> {
    let field = z.field();
    let par = &z.par;
    let n_l = z.levi.module.dim;
    if par.levi.is_empty() {
        return Ok(());
    }
    for &i in &par.levi {
        for (side, mat_z, mat_l) in [
            ("e", &z.module.e_mats[i], &z.levi.module.e_mats[i]),
            ("f", &z.module.f_mats[i], &z.levi.module.f_mats[i]),
        ] {
            for j in 0..n_l {
                // embed v_j at the zero-exponent block
                let emb = unit_vector(field, z.module.dim, j);
                let lhs = mat_z.matvec(field, &z.apply_ef(&emb));
                // E F (x) (x_alpha v_j)
                let xv = mat_l.matvec(field, &unit_vector(field, n_l, j));
                let mut emb2 = vec![0u64; z.module.dim * field.degree()];
                for t in 0..n_l {
                    vec_set_entry(field, &mut emb2, t, &vec_entry(field, &xv, t));
                }
                let rhs = z.apply_ef(&emb2);
                if lhs != rhs {
                    return Err(format!("{side}_{} does not commute through E*F at v_{j}", i + 1));
                }
            }
        }
    }
    Ok(())
}

/// Positive complement exponent in the raising part: every e-monomial in the
/// normal form of `E * f^l` (some `l_i < p-1`) touches a complement root.
pub fn check_positive_complement_exponent(
    cb: &ChevalleyBasis,
    par: &ParabolicData,
    chi: &PChar,
) -> Result<(), String> {
    let field = &cb.field;
    let engine = PbwEngine::new(cb, GenOrder::for_parabolic(par), chi.clone());
    let p = field.p() as usize;
    let k = par.k();
    let blocks = p.pow(k as u32);
    let top = blocks - 1;
    for lidx in 0..blocks {
        if lidx == top {
            continue;
        }
        let tuple = index_tuple(p, k, lidx);
        let mut word = engine.top_e_word(&par.complement);
        for (slot, &root) in par.complement.iter().enumerate() {
            for _ in 0..tuple[slot] {
                word.push(Gen::F(root));
            }
        }
        let nf = engine.normal_form_word(&field.one(), &word);
        for mono in nf.terms.keys() {
            let has_comp_e = mono.e.iter().enumerate().any(|(pos, &exp)| {
                exp > 0 && !par.in_levi(engine.order.e_seq()[pos])
            });
            if !has_comp_e {
                return Err(format!(
                    "monomial without complement raising part at l = {tuple:?}: {}",
                    engine.display(&PBWElement {
                        terms: [(mono.clone(), field.one())].into_iter().collect()
                    })
                ));
            }
        }
    }
    Ok(())
}

/// Diagnostic reproduction of the simplicity proof's normalization step:
/// multiply by complement f's with chi-value zero in descending heights,
/// then by those with nonzero chi-value in ascending heights, raising every
/// exponent to p-1. Returns the normalized vector.
pub fn two_phase_normalize(z: &InducedModule, x: &[u64]) -> Vec<u64> {
    let field = z.field();
    let p = field.p() as usize;
    let n_l = z.levi.module.dim;
    let max_exp = |w: &[u64], slot: usize| -> usize {
        let mut best = 0;
        for (idx, _) in w.chunks(field.degree()).enumerate().filter(|(_, c)| !vec_is_zero(c)) {
            let tuple = index_tuple(p, z.k, idx / n_l);
            best = best.max(tuple[slot] as usize);
        }
        best
    };
    let mut w = x.to_vec();
    // descending heights, chi(f) = 0
    for slot in (0..z.k).rev() {
        let root = z.par.complement[slot];
        if !field.is_zero(&z.chi.f_vals[root]) {
            continue;
        }
        let t = max_exp(&w, slot);
        for _ in 0..(p - 1 - t) {
            w = z.comp_f[slot].matvec(field, &w);
        }
    }
    // ascending heights, chi(f) != 0
    for slot in 0..z.k {
        let root = z.par.complement[slot];
        if field.is_zero(&z.chi.f_vals[root]) {
            continue;
        }
        let t = max_exp(&w, slot);
        for _ in 0..(p - 1 - t) {
            w = z.comp_f[slot].matvec(field, &w);
        }
    }
    w
}

/// One line of the operator-identity report.
#[derive(Debug, Clone)]
pub struct IdentityOutcome {
    pub name: String,
    pub passed: bool,
    pub vacuous: bool,
    pub detail: String,
}

impl IdentityOutcome {
    fn pass(name: &str) -> IdentityOutcome {
        IdentityOutcome {
            name: name.into(),
            passed: true,
            vacuous: false,
            detail: String::new(),
        }
    }

    fn vacuous(name: &str, why: &str) -> IdentityOutcome {
        IdentityOutcome {
            name: name.into(),
            passed: true,
            vacuous: true,
            detail: why.into(),
        }
    }

    fn from_result(name: &str, r: Result<(), String>) -> IdentityOutcome {
        match r {
            Ok(()) => IdentityOutcome::pass(name),
            Err(detail) => IdentityOutcome {
                name: name.into(),
                passed: false,
                vacuous: false,
                detail,
            },
        }
    }
}

/// Runs the full operator-identity suite for one configuration: the
/// insertion rule, the Levi bracket vanishings, support confinement, the
/// exponent-drop lemmas, the positive-complement-exponent property, operator
/// vanishing, and commutation through the top operator. Module-level checks
/// run at the extreme compatible weights.
pub fn run_identity_suite(
    cb: &ChevalleyBasis,
    par: &ParabolicData,
    chi: &PChar,
    chop_seed: u64,
) -> Vec<IdentityOutcome> {
    let field = &cb.field;
    let engine = PbwEngine::new(cb, GenOrder::for_parabolic(par), chi.clone());
    let mut out = Vec::new();

    // insertion rule over the full positive system and over the complement
    let all_roots: Vec<usize> = (0..par.rs.num_positive()).collect();
    let mut insertion_ok = Ok(());
    for (label, subset) in [("Phi+", &all_roots), ("complement", &par.complement)] {
        for k_pos in 0..subset.len() {
            if !crate::pbw::insertion_check(&engine, subset, k_pos) {
                insertion_ok = Err(format!(
                    "insertion of e at position {k_pos} of {label} did not vanish"
                ));
                break;
            }
        }
    }
    out.push(IdentityOutcome::from_result("insertion_vanishing", insertion_ok));

    if par.phi_i_plus.is_empty() {
        out.push(IdentityOutcome::vacuous(
            "levi_brackets",
            "Phi_I+ is empty when I = {}",
        ));
    } else {
        out.push(IdentityOutcome::from_result(
            "levi_brackets",
            crate::pbw::check_levi_brackets(&engine, par),
        ));
    }

    out.push(IdentityOutcome::from_result(
        "cartan_commutes_ef",
        crate::pbw::check_cartan_commutes(&engine, par),
    ));

    out.push(IdentityOutcome::from_result(
        "support_confinement",
        crate::pbw::check_support_confinement(&engine, par),
    ));

    if par.levi.is_empty() {
        out.push(IdentityOutcome::vacuous("exponent_drop_e", "I is empty"));
        out.push(IdentityOutcome::vacuous("exponent_drop_f", "I is empty"));
    } else {
        out.push(IdentityOutcome::from_result(
            "exponent_drop_e",
            crate::pbw::check_exponent_drop(&engine, par, false),
        ));
        out.push(IdentityOutcome::from_result(
            "exponent_drop_f",
            crate::pbw::check_exponent_drop(&engine, par, true),
        ));
    }

    out.push(IdentityOutcome::from_result(
        "positive_complement_exponent",
        check_positive_complement_exponent(cb, par, chi),
    ));

    // module-level checks at the first and last compatible weights
    let lambdas = compatible_lambdas(field, par, chi);
    let sample: Vec<&Weight> = match lambdas.len() {
        0 => Vec::new(),
        1 => vec![&lambdas[0]],
        n => vec![&lambdas[0], &lambdas[n - 1]],
    };
    if sample.is_empty() {
        out.push(IdentityOutcome::vacuous(
            "operator_vanishing",
            "no compatible weight",
        ));
        out.push(IdentityOutcome::vacuous(
            "commutation_through_ef",
            "no compatible weight",
        ));
        return out;
    }
    let mut vanish = Ok(());
    let mut commute = Ok(());
    for lam in sample {
        match build_levi_simple(cb, par, chi, lam, chop_seed) {
            Ok(levi) => {
                let z = build_induced(cb, par, chi, &levi);
                if vanish.is_ok() {
                    vanish = check_operator_vanishing(&z);
                }
                if commute.is_ok() {
                    commute = check_commutation_through_ef(&z);
                }
            }
            Err(e) => {
                vanish = Err(format!("could not build module: {e}"));
                break;
            }
        }
    }
    out.push(IdentityOutcome::from_result("operator_vanishing", vanish));
    if par.levi.is_empty() {
        out.push(IdentityOutcome::vacuous("commutation_through_ef", "I is empty"));
    } else {
        out.push(IdentityOutcome::from_result("commutation_through_ef", commute));
    }
    out
}
