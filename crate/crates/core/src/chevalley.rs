//! Chevalley basis over `F_{p^m}`: signed integer structure constants, the
//! bracket on basis elements, and the restricted p-operation.
//!
//! Signs are fixed by the extraspecial-pair procedure: for each non-simple
//! positive root the special pair with smallest first member (in the root
//! order) gets `N = +(r+1)`; every other constant is forced by antisymmetry,
//! the Chevalley involution, and the two Jacobi-type identities on triples
//! and quadruples of roots summing to zero. Constants are computed exactly
//! over the integers and only then reduced into the field.

use crate::gfield::{Field, FieldElement};
use crate::linalg::Mat;
use crate::rootsys::{good_prime_check, RootSystem};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChevalleyError {
    #[error("prime {0} is not good for type {1}{2}")]
    BadPrime(u64, char, usize),
}

/// A basis element of `g`: root vectors indexed by positive roots plus the
/// simple coroots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    E(usize),
    F(usize),
    H(usize),
}

/// Convention for realizing the negative root vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FConvention {
    /// `f_beta = e_{-beta}`, so `[e_beta, f_beta] = h_beta`.
    #[default]
    Standard,
    /// `f_beta = -e_{-beta}`; kept behind a flag so verdict equality between
    /// the two readings of the convention can be tested.
    Negated,
}

#[derive(Debug)]
pub struct ChevalleyBasis {
    pub rs: Arc<RootSystem>,
    pub field: Field,
    n_pos: usize,
    /// Integer `N_{sigma,tau}` for signed roots (positive block first).
    n_signed: Vec<i64>,
    /// Scaling applied to each `f_beta` relative to `e_{-beta}`.
    f_scaling: Vec<FieldElement>,
}

fn signed_neg(s: usize, n: usize) -> usize {
    if s < n {
        s + n
    } else {
        s - n
    }
}

impl ChevalleyBasis {
    pub fn build(rs: &Arc<RootSystem>, field: &Field) -> Result<ChevalleyBasis, ChevalleyError> {
        let ones = vec![field.one(); rs.num_positive()];
        ChevalleyBasis::build_scaled(rs, field, ones, FConvention::Standard)
    }

    pub fn build_with_convention(
        rs: &Arc<RootSystem>,
        field: &Field,
        conv: FConvention,
    ) -> Result<ChevalleyBasis, ChevalleyError> {
        let s = match conv {
            FConvention::Standard => field.one(),
            FConvention::Negated => field.elt(-1),
        };
        ChevalleyBasis::build_scaled(rs, field, vec![s; rs.num_positive()], conv)
    }

    /// Builds the basis with an arbitrary nonzero rescaling of each `f_beta`.
    pub fn build_scaled(
        rs: &Arc<RootSystem>,
        field: &Field,
        f_scaling: Vec<FieldElement>,
        _conv: FConvention,
    ) -> Result<ChevalleyBasis, ChevalleyError> {
        if !good_prime_check(rs, field.p()) {
            return Err(ChevalleyError::BadPrime(
                field.p(),
                rs.series.letter(),
                rs.rank,
            ));
        }
        assert!(f_scaling.iter().all(|s| !field.is_zero(s)));
        let n = rs.num_positive();
        let pos = compute_positive_constants(rs);
        let mut n_signed = vec![0i64; 4 * n * n];
        for a in 0..2 * n {
            for b in 0..2 * n {
                if a == b || a == signed_neg(b, n) {
                    continue;
                }
                if signed_sum(rs, a, b).is_some() {
                    n_signed[a * 2 * n + b] = resolve_signed(rs, &pos, a, b);
                }
            }
        }
        let cb = ChevalleyBasis {
            rs: Arc::clone(rs),
            field: field.clone(),
            n_pos: n,
            n_signed,
            f_scaling,
        };
        cb.verify_construction();
        Ok(cb)
    }

    /// Construction-time invariants: |N| = r+1, antisymmetry, nonvanishing
    /// mod p, sl2 normalization, and the Jacobi identity on all basis
    /// triples over the field.
    fn verify_construction(&self) {
        let n = self.n_pos;
        let rs = &self.rs;
        for a in 0..2 * n {
            for b in 0..2 * n {
                if a == b || a == signed_neg(b, n) {
                    continue;
                }
                let nv = self.n_signed[a * 2 * n + b];
                match signed_sum(rs, a, b) {
                    None => assert_eq!(nv, 0),
                    Some(_) => {
                        let r = signed_string_down(rs, b, a);
                        assert_eq!(nv.unsigned_abs() as i64, r + 1, "|N| = r+1 at ({a},{b})");
                        assert_eq!(nv, -self.n_signed[b * 2 * n + a], "antisymmetry");
                        assert!(nv.unsigned_abs() % self.field.p() != 0, "good prime");
                    }
                }
            }
        }
        // sl2 triples and Jacobi over the field
        let gens = self.all_gens();
        for &a in &gens {
            for &b in &gens {
                for &c in &gens {
                    let mut acc: BTreeMap<Gen, FieldElement> = BTreeMap::new();
                    self.add_combo(&mut acc, &self.bracket_combo_gen(a, &self.bracket_gen(b, c)));
                    self.add_combo(&mut acc, &self.bracket_combo_gen(b, &self.bracket_gen(c, a)));
                    self.add_combo(&mut acc, &self.bracket_combo_gen(c, &self.bracket_gen(a, b)));
                    assert!(
                        acc.values().all(|v| self.field.is_zero(v)),
                        "Jacobi fails on ({a:?},{b:?},{c:?})"
                    );
                }
            }
        }
        for beta in 0..n {
            let br = self.bracket_gen(Gen::E(beta), Gen::F(beta));
            let mut expected: BTreeMap<Gen, FieldElement> = BTreeMap::new();
            for (i, &c) in rs.roots[beta].coroot.iter().enumerate() {
                let v = self.field.mul(&self.field.elt(c), &self.f_scaling[beta]);
                expected.insert(Gen::H(i), v);
            }
            let got: BTreeMap<Gen, FieldElement> = br.into_iter().collect();
            let expected: BTreeMap<Gen, FieldElement> = expected
                .into_iter()
                .filter(|(_, v)| !self.field.is_zero(v))
                .collect();
            assert_eq!(got, expected, "sl2 triple at root {beta}");
        }
    }

    pub fn num_positive(&self) -> usize {
        self.n_pos
    }

    pub fn f_scaling(&self) -> &[FieldElement] {
        &self.f_scaling
    }

    pub fn all_gens(&self) -> Vec<Gen> {
        let mut v = Vec::with_capacity(2 * self.n_pos + self.rs.rank);
        for r in 0..self.n_pos {
            v.push(Gen::E(r));
        }
        for r in 0..self.n_pos {
            v.push(Gen::F(r));
        }
        for i in 0..self.rs.rank {
            v.push(Gen::H(i));
        }
        v
    }

    /// Integer structure constant for a pair of signed roots (positive index
    /// in `0..n`, negative in `n..2n`).
    pub fn n_const(&self, a: usize, b: usize) -> i64 {
        self.n_signed[a * 2 * self.n_pos + b]
    }

    /// Bracket of two basis elements as a sparse field-coefficient combination.
    pub fn bracket_gen(&self, x: Gen, y: Gen) -> Vec<(Gen, FieldElement)> {
        let f = &self.field;
        let rs = &self.rs;
        let n = self.n_pos;
        let pair = |root: usize, i: usize| rs.pairing_simple(root, i);
        match (x, y) {
            (Gen::H(_), Gen::H(_)) => Vec::new(),
            (Gen::H(i), Gen::E(r)) => {
                let c = f.elt(pair(r, i));
                if f.is_zero(&c) { Vec::new() } else { vec![(Gen::E(r), c)] }
            }
            (Gen::H(i), Gen::F(r)) => {
                let c = f.elt(-pair(r, i));
                if f.is_zero(&c) { Vec::new() } else { vec![(Gen::F(r), c)] }
            }
            (Gen::E(r), Gen::H(i)) => {
                let c = f.elt(-pair(r, i));
                if f.is_zero(&c) { Vec::new() } else { vec![(Gen::E(r), c)] }
            }
            (Gen::F(r), Gen::H(i)) => {
                let c = f.elt(pair(r, i));
                if f.is_zero(&c) { Vec::new() } else { vec![(Gen::F(r), c)] }
            }
            (Gen::E(r), Gen::E(s)) => match rs.sum_index(r, s) {
                Some(t) => {
                    let c = f.elt(self.n_const(r, s));
                    if f.is_zero(&c) { Vec::new() } else { vec![(Gen::E(t), c)] }
                }
                None => Vec::new(),
            },
            (Gen::F(r), Gen::F(s)) => match rs.sum_index(r, s) {
                Some(t) => {
                    let nn = self.n_const(r + n, s + n);
                    let scale = f
                        .div(
                            &f.mul(&self.f_scaling[r], &self.f_scaling[s]),
                            &self.f_scaling[t],
                        )
                        .expect("scalings nonzero");
                    let c = f.mul(&f.elt(nn), &scale);
                    if f.is_zero(&c) { Vec::new() } else { vec![(Gen::F(t), c)] }
                }
                None => Vec::new(),
            },
            (Gen::E(r), Gen::F(s)) => {
                if r == s {
                    let mut out = Vec::new();
                    for (i, &c) in rs.roots[r].coroot.iter().enumerate() {
                        let v = f.mul(&f.elt(c), &self.f_scaling[r]);
                        if !f.is_zero(&v) {
                            out.push((Gen::H(i), v));
                        }
                    }
                    return out;
                }
                let nn = self.n_const(r, s + n);
                if nn == 0 {
                    return Vec::new();
                }
                if let Some(d) = rs.diff_index(r, s) {
                    let c = f.mul(&f.elt(nn), &self.f_scaling[s]);
                    if f.is_zero(&c) { Vec::new() } else { vec![(Gen::E(d), c)] }
                } else if let Some(d) = rs.diff_index(s, r) {
                    let scale = f
                        .div(&self.f_scaling[s], &self.f_scaling[d])
                        .expect("scalings nonzero");
                    let c = f.mul(&f.elt(nn), &scale);
                    if f.is_zero(&c) { Vec::new() } else { vec![(Gen::F(d), c)] }
                } else {
                    Vec::new()
                }
            }
            (Gen::F(s), Gen::E(r)) => {
                let mut out = self.bracket_gen(Gen::E(r), Gen::F(s));
                for (_, c) in out.iter_mut() {
                    *c = f.neg(c);
                }
                out
            }
        }
    }

    fn bracket_combo_gen(&self, x: Gen, combo: &[(Gen, FieldElement)]) -> Vec<(Gen, FieldElement)> {
        let mut acc: BTreeMap<Gen, FieldElement> = BTreeMap::new();
        for (g, c) in combo {
            for (h, d) in self.bracket_gen(x, *g) {
                let v = self.field.mul(c, &d);
                let entry = acc.entry(h).or_insert_with(|| self.field.zero());
                *entry = self.field.add(entry, &v);
            }
        }
        acc.into_iter().filter(|(_, v)| !self.field.is_zero(v)).collect()
    }

    fn add_combo(&self, acc: &mut BTreeMap<Gen, FieldElement>, combo: &[(Gen, FieldElement)]) {
        for (g, c) in combo {
            let entry = acc.entry(*g).or_insert_with(|| self.field.zero());
            *entry = self.field.add(entry, c);
        }
    }

    /// The restricted p-operation on basis elements: root vectors map to
    /// zero, coroots are fixed.
    pub fn p_power(&self, x: Gen) -> Option<Gen> {
        match x {
            Gen::E(_) | Gen::F(_) => None,
            Gen::H(i) => Some(Gen::H(i)),
        }
    }

    /// Adjoint matrix of a basis element on `g`, basis ordered
    /// `e_0..e_{n-1}, f_0..f_{n-1}, h_0..h_{l-1}`.
    pub fn ad_matrix(&self, x: Gen) -> Mat {
        let n = self.n_pos;
        let l = self.rs.rank;
        let dim = 2 * n + l;
        let idx = |g: Gen| match g {
            Gen::E(r) => r,
            Gen::F(r) => n + r,
            Gen::H(i) => 2 * n + i,
        };
        let mut mat = Mat::zeros(&self.field, dim, dim);
        for col_gen in self.all_gens() {
            let j = idx(col_gen);
            for (g, c) in self.bracket_gen(x, col_gen) {
                let i = idx(g);
                let cur = mat.get(i, j);
                mat.set(i, j, &self.field.add(&cur, &c));
            }
        }
        mat
    }

    /// Audit dump of the structure-constant table: one `alpha,beta,N` line
    /// per pair of signed roots whose sum is a root.
    pub fn dump_structure_constants_csv(&self) -> String {
        let n = self.n_pos;
        let disp = |s: usize| {
            if s < n {
                self.rs.display_root(s)
            } else {
                format!("-({})", self.rs.display_root(s - n))
            }
        };
        let mut out = String::from("alpha,beta,n\n");
        for a in 0..2 * n {
            for b in 0..2 * n {
                let v = self.n_signed[a * 2 * n + b];
                if v != 0 {
                    out.push_str(&format!("{},{},{}\n", disp(a), disp(b), v));
                }
            }
        }
        out
    }
}

fn signed_coeffs(rs: &RootSystem, s: usize) -> Vec<i64> {
    let n = rs.num_positive();
    if s < n {
        rs.roots[s].coeffs.clone()
    } else {
        rs.roots[s - n].coeffs.iter().map(|&c| -c).collect()
    }
}

fn signed_lookup(rs: &RootSystem, coeffs: &[i64]) -> Option<usize> {
    if coeffs.iter().all(|&c| c == 0) {
        return None;
    }
    if coeffs.iter().all(|&c| c >= 0) {
        return rs.root_index(coeffs);
    }
    if coeffs.iter().all(|&c| c <= 0) {
        let neg: Vec<i64> = coeffs.iter().map(|&c| -c).collect();
        return rs.root_index(&neg).map(|i| i + rs.num_positive());
    }
    None
}

fn signed_sum(rs: &RootSystem, a: usize, b: usize) -> Option<usize> {
    let ca = signed_coeffs(rs, a);
    let cb = signed_coeffs(rs, b);
    let sum: Vec<i64> = ca.iter().zip(cb.iter()).map(|(x, y)| x + y).collect();
    signed_lookup(rs, &sum)
}

fn signed_length_sq(rs: &RootSystem, s: usize) -> i64 {
    let n = rs.num_positive();
    rs.length_sq(if s < n { s } else { s - n })
}

/// Max `r` with `beta - r*alpha` a root, for signed roots.
fn signed_string_down(rs: &RootSystem, beta: usize, alpha: usize) -> i64 {
    let ca = signed_coeffs(rs, alpha);
    let mut cur = signed_coeffs(rs, beta);
    let mut r = 0;
    loop {
        for (c, a) in cur.iter_mut().zip(ca.iter()) {
            *c -= a;
        }
        if signed_lookup(rs, &cur).is_none() {
            break;
        }
        r += 1;
    }
    r
}

/// Structure constants for pairs of positive roots, by the extraspecial-pair
/// algorithm, exact over the integers.
fn compute_positive_constants(rs: &RootSystem) -> Vec<i64> {
    let n = rs.num_positive();
    let mut table = vec![0i64; n * n];
    for xi in 0..n {
        if rs.roots[xi].height == 1 {
            continue;
        }
        // special pairs (g, d), g < d in the root order, summing to xi
        let mut special = Vec::new();
        for g in 0..n {
            for d in g + 1..n {
                if rs.sum_index(g, d) == Some(xi) {
                    special.push((g, d));
                }
            }
        }
        special.sort_unstable();
        let (a, b) = special[0];
        let r = signed_string_down(rs, b, a);
        table[a * n + b] = r + 1;
        table[b * n + a] = -(r + 1);
        for &(g, d) in special.iter().skip(1) {
            // quadruple identity on (a, b, -g, -d), which sums to zero:
            //   N(a,b)N(-g,-d)/(xi,xi) + N(b,-g)N(a,-d)/(b-g,b-g)
            //     + N(-g,a)N(b,-d)/(a-g,a-g) = 0
            let len_xi = rs.length_sq(xi);
            let (mut n2, mut d2) = (0i64, 1i64);
            let bg: Vec<i64> = rs.roots[b]
                .coeffs
                .iter()
                .zip(rs.roots[g].coeffs.iter())
                .map(|(x, y)| x - y)
                .collect();
            if let Some(bg_idx) = signed_lookup(rs, &bg) {
                let x1 = resolve_signed(rs, &table, b, g + n);
                let x2 = resolve_signed(rs, &table, a, d + n);
                n2 = x1 * x2;
                d2 = signed_length_sq(rs, bg_idx);
            }
            let (mut n3, mut d3) = (0i64, 1i64);
            let ag: Vec<i64> = rs.roots[a]
                .coeffs
                .iter()
                .zip(rs.roots[g].coeffs.iter())
                .map(|(x, y)| x - y)
                .collect();
            if let Some(ag_idx) = signed_lookup(rs, &ag) {
                let x1 = resolve_signed(rs, &table, g + n, a);
                let x2 = resolve_signed(rs, &table, b, d + n);
                n3 = x1 * x2;
                d3 = signed_length_sq(rs, ag_idx);
            }
            let num = len_xi * (n2 * d3 + n3 * d2);
            let den = d2 * d3 * table[a * n + b];
            assert_eq!(num % den, 0, "structure constants must be integral");
            let val = num / den;
            table[g * n + d] = val;
            table[d * n + g] = -val;
        }
    }
    table
}

/// Resolves `N_{sigma,tau}` for signed roots from the positive-pair table,
/// using antisymmetry, the Chevalley involution, and the triple identity
/// `N_{a,b}/(c,c) = N_{b,c}/(a,a)` for `a+b+c = 0`.
fn resolve_signed(rs: &RootSystem, pos_table: &[i64], a: usize, b: usize) -> i64 {
    let n = rs.num_positive();
    debug_assert!(signed_sum(rs, a, b).is_some());
    match (a < n, b < n) {
        (true, true) => pos_table[a * n + b],
        (false, false) => -resolve_signed(rs, pos_table, a - n, b - n),
        (true, false) => {
            let sigma = a;
            let mu = b - n;
            if let Some(nu) = rs.diff_index(sigma, mu) {
                // sigma - mu = nu > 0:  N_{sigma,-mu} = -(nu,nu)/(sigma,sigma) N_{mu,nu}
                let num = -rs.length_sq(nu) * pos_table[mu * n + nu];
                let den = rs.length_sq(sigma);
                debug_assert_eq!(num % den, 0);
                num / den
            } else {
                let nu = rs
                    .diff_index(mu, sigma)
                    .expect("sum is a root, so one difference direction exists");
                // mu - sigma = nu > 0:  N_{sigma,-mu} = -(nu,nu)/(mu,mu) N_{sigma,nu}
                let num = -rs.length_sq(nu) * pos_table[sigma * n + nu];
                let den = rs.length_sq(mu);
                debug_assert_eq!(num % den, 0);
                num / den
            }
        }
        (false, true) => -resolve_signed(rs, pos_table, b, a),
    }
}
