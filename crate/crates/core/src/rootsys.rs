//! Root-system combinatorics: positive roots with heights, coroots, the
//! half-sum weight, parabolic subsets, and closed subsets of the positive
//! roots.
//!
//! Positive roots are generated from the Cartan matrix by iterated root-string
//! addition, sorted by (height, lexicographic coefficient vector). That order
//! is the tie-break used everywhere a deterministic refinement of "ascending
//! heights" is needed.

use crate::gfield::{Field, FieldElement};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("unsupported root system type {0}{1}")]
    UnsupportedType(char, usize),
    #[error("parabolic subset must be a proper subset of the simple roots")]
    ImproperSubset,
    #[error("simple-root index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Series {
    A,
    B,
    C,
    D,
    G2,
    F4,
}

impl Series {
    pub fn letter(&self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::G2 => 'G',
            Series::F4 => 'F',
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A positive root, stored as its coefficient vector over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosRoot {
    pub coeffs: Vec<i64>,
    pub height: i64,
    /// Expansion of the coroot `h_beta` over the simple coroots `h_i`.
    pub coroot: Vec<i64>,
    /// For non-simple roots: `(i, j)` with `beta = alpha_i + roots[j]`.
    pub parent: Option<(usize, usize)>,
}

#[derive(Debug)]
pub struct RootSystem {
    pub series: Series,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_i, alpha_j^v>`.
    pub cartan: Vec<Vec<i64>>,
    /// Symmetrizers: `(alpha_i, alpha_j) = d_j * cartan[i][j]`.
    pub d: Vec<i64>,
    pub roots: Vec<PosRoot>,
    index: HashMap<Vec<i64>, usize>,
}

fn cartan_matrix(series: Series, l: usize) -> Result<(Vec<Vec<i64>>, Vec<i64>), RootError> {
    let bad = |s: Series, l: usize| RootError::UnsupportedType(s.letter(), l);
    let mut a = vec![vec![0i64; l]; l];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |a: &mut Vec<Vec<i64>>| {
        for i in 0..l - 1 {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    };
    match series {
        Series::A => {
            if l < 1 {
                return Err(bad(series, l));
            }
            if l > 1 {
                chain(&mut a);
            }
            Ok((a, vec![1; l]))
        }
        Series::B => {
            if l < 2 {
                return Err(bad(series, l));
            }
            chain(&mut a);
            a[l - 2][l - 1] = -2; // alpha_l short
            a[l - 1][l - 2] = -1;
            let mut d = vec![2; l];
            d[l - 1] = 1;
            Ok((a, d))
        }
        Series::C => {
            if l < 2 {
                return Err(bad(series, l));
            }
            chain(&mut a);
            a[l - 2][l - 1] = -1;
            a[l - 1][l - 2] = -2; // alpha_l long
            let mut d = vec![1; l];
            d[l - 1] = 2;
            Ok((a, d))
        }
        Series::D => {
            if l < 3 {
                return Err(bad(series, l));
            }
            for i in 0..l - 2 {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
            a[l - 3][l - 1] = -1;
            a[l - 1][l - 3] = -1;
            Ok((a, vec![1; l]))
        }
        Series::G2 => {
            if l != 2 {
                return Err(bad(series, l));
            }
            // alpha_1 short, alpha_2 long
            let a = vec![vec![2, -1], vec![-3, 2]];
            Ok((a, vec![1, 3]))
        }
        Series::F4 => {
            if l != 4 {
                return Err(bad(series, l));
            }
            let a = vec![
                vec![2, -1, 0, 0],
                vec![-1, 2, -2, 0],
                vec![0, -1, 2, -1],
                vec![0, 0, -1, 2],
            ];
            Ok((a, vec![2, 2, 1, 1]))
        }
    }
}

impl RootSystem {
    pub fn build(series: Series, rank: usize) -> Result<Arc<RootSystem>, RootError> {
        let (cartan, d) = cartan_matrix(series, rank)?;
        let mut coeff_list: Vec<Vec<i64>> = Vec::new();
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        for i in 0..rank {
            let mut c = vec![0i64; rank];
            c[i] = 1;
            seen.insert(c.clone(), coeff_list.len());
            coeff_list.push(c);
        }
        // closure by root strings: beta + alpha_i is a root iff
        // r - <beta, alpha_i^v> > 0 where r is the downward string length
        let mut head = 0;
        while head < coeff_list.len() {
            let beta = coeff_list[head].clone();
            for i in 0..rank {
                let pairing: i64 = (0..rank).map(|j| beta[j] * cartan[j][i]).sum();
                let mut r = 0i64;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if down.iter().all(|&c| c == 0) || !seen.contains_key(&down) {
                        break;
                    }
                    r += 1;
                }
                if r - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !seen.contains_key(&up) {
                        seen.insert(up.clone(), coeff_list.len());
                        coeff_list.push(up);
                    }
                }
            }
            head += 1;
        }
        // canonical order: ascending height, lexicographic tie-break
        coeff_list.sort_by(|x, y| {
            let hx: i64 = x.iter().sum();
            let hy: i64 = y.iter().sum();
            hx.cmp(&hy).then(x.cmp(y))
        });
        let index: HashMap<Vec<i64>, usize> = coeff_list
            .iter()
            .enumerate()
            .map(|(k, c)| (c.clone(), k))
            .collect();
        let mut roots = Vec::with_capacity(coeff_list.len());
        for coeffs in &coeff_list {
            let height: i64 = coeffs.iter().sum();
            let coroot = coroot_expansion(&cartan, &d, coeffs);
            let parent = if height == 1 {
                None
            } else {
                let mut found = None;
                for i in 0..rank {
                    if coeffs[i] == 0 {
                        continue;
                    }
                    let mut rest = coeffs.clone();
                    rest[i] -= 1;
                    if let Some(&j) = index.get(&rest) {
                        found = Some((i, j));
                        break;
                    }
                }
                Some(found.expect("every non-simple positive root has a simple summand"))
            };
            roots.push(PosRoot {
                coeffs: coeffs.clone(),
                height,
                coroot,
                parent,
            });
        }
        Ok(Arc::new(RootSystem {
            series,
            rank,
            cartan,
            d,
            roots,
            index,
        }))
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len()
    }

    pub fn root_index(&self, coeffs: &[i64]) -> Option<usize> {
        self.index.get(coeffs).copied()
    }

    /// Index of the sum of two positive roots, if it is again a positive root.
    pub fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        let sum: Vec<i64> = self.roots[a]
            .coeffs
            .iter()
            .zip(self.roots[b].coeffs.iter())
            .map(|(x, y)| x + y)
            .collect();
        self.root_index(&sum)
    }

    /// Index of `a - b` when it is a positive root.
    pub fn diff_index(&self, a: usize, b: usize) -> Option<usize> {
        let diff: Vec<i64> = self.roots[a]
            .coeffs
            .iter()
            .zip(self.roots[b].coeffs.iter())
            .map(|(x, y)| x - y)
            .collect();
        if diff.iter().any(|&c| c < 0) {
            return None;
        }
        self.root_index(&diff)
    }

    /// `<beta, alpha_i^v>`, the Cartan pairing of a positive root with a
    /// simple coroot.
    pub fn pairing_simple(&self, beta: usize, i: usize) -> i64 {
        self.roots[beta]
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| c * self.cartan[j][i])
            .sum()
    }

    /// Scaled squared length `(beta, beta)` in the symmetrizer normalization.
    pub fn length_sq(&self, beta: usize) -> i64 {
        let c = &self.roots[beta].coeffs;
        let mut acc = 0i64;
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += c[i] * c[j] * self.d[j] * self.cartan[i][j];
            }
        }
        acc
    }

    /// Downward root-string length: max `r` with `beta - r*alpha` a root.
    pub fn string_down(&self, beta: usize, alpha: usize) -> i64 {
        let mut r = 0;
        let mut cur = self.roots[beta].coeffs.clone();
        loop {
            for (c, a) in cur.iter_mut().zip(self.roots[alpha].coeffs.iter()) {
                *c -= a;
            }
            let neg: Vec<i64> = cur.iter().map(|&c| -c).collect();
            if self.index.contains_key(&cur) || self.index.contains_key(&neg) {
                r += 1;
            } else {
                break;
            }
        }
        r
    }

    pub fn display_root(&self, beta: usize) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.roots[beta].coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c == 1 {
                parts.push(format!("a{}", i + 1));
            } else {
                parts.push(format!("{}a{}", c, i + 1));
            }
        }
        parts.join("+")
    }
}

/// Coroot of `beta`: `h_beta = sum_i c_i d_i / d_beta * h_i` with
/// `d_beta = (beta,beta)/2` in the same normalization as `d`.
fn coroot_expansion(cartan: &[Vec<i64>], d: &[i64], coeffs: &[i64]) -> Vec<i64> {
    let l = d.len();
    let mut len2 = 0i64;
    for i in 0..l {
        for j in 0..l {
            len2 += coeffs[i] * coeffs[j] * d[j] * cartan[i][j];
        }
    }
    debug_assert!(len2 > 0 && len2 % 2 == 0);
    let d_beta = len2 / 2;
    coeffs
        .iter()
        .zip(d.iter())
        .map(|(&c, &di)| {
            let num = c * di;
            debug_assert_eq!(num % d_beta, 0, "coroot expansion must be integral");
            num / d_beta
        })
        .collect()
}

/// True iff `p` is a good prime for the given type.
pub fn good_prime_check(rs: &RootSystem, p: u64) -> bool {
    match rs.series {
        Series::A => true,
        Series::B | Series::C | Series::D => p != 2,
        Series::G2 | Series::F4 => p != 2 && p != 3,
    }
}

/// A proper subset `I` of the simple roots together with the induced split of
/// the positive roots.
#[derive(Debug, Clone)]
pub struct ParabolicData {
    pub rs: Arc<RootSystem>,
    /// 0-based simple-root indices, sorted.
    pub levi: Vec<usize>,
    /// Positive roots supported on `I`, in the canonical root order.
    pub phi_i_plus: Vec<usize>,
    /// The complement `(beta_1, ..., beta_k)` in ascending heights
    /// (lexicographic tie-break).
    pub complement: Vec<usize>,
}

impl ParabolicData {
    pub fn k(&self) -> usize {
        self.complement.len()
    }

    pub fn in_levi(&self, root: usize) -> bool {
        self.phi_i_plus.contains(&root)
    }
}

pub fn parabolic(rs: &Arc<RootSystem>, levi_indices: &[usize]) -> Result<ParabolicData, RootError> {
    let mut levi: Vec<usize> = levi_indices.to_vec();
    levi.sort_unstable();
    levi.dedup();
    for &i in &levi {
        if i >= rs.rank {
            return Err(RootError::IndexOutOfRange(i + 1, rs.rank));
        }
    }
    if levi.len() == rs.rank {
        return Err(RootError::ImproperSubset);
    }
    let mut phi_i_plus = Vec::new();
    let mut complement = Vec::new();
    for (idx, root) in rs.roots.iter().enumerate() {
        let supported = root
            .coeffs
            .iter()
            .enumerate()
            .all(|(j, &c)| c == 0 || levi.contains(&j));
        if supported {
            phi_i_plus.push(idx);
        } else {
            complement.push(idx);
        }
    }
    Ok(ParabolicData {
        rs: Arc::clone(rs),
        levi,
        phi_i_plus,
        complement,
    })
}

/// True iff `S` (a set of positive-root indices) is closed under addition
/// inside the positive roots.
pub fn is_closed(rs: &RootSystem, subset: &[usize]) -> bool {
    for (pos, &a) in subset.iter().enumerate() {
        for &b in subset.iter().skip(pos) {
            if let Some(s) = rs.sum_index(a, b) {
                if !subset.contains(&s) {
                    return false;
                }
            }
        }
    }
    true
}

/// A weight, stored by its values on the simple coroots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    pub values: Vec<FieldElement>,
}

impl Weight {
    pub fn new(values: Vec<FieldElement>) -> Weight {
        Weight { values }
    }

    /// `lambda(h_beta)` via the integer coroot expansion.
    pub fn eval_coroot(&self, field: &Field, rs: &RootSystem, beta: usize) -> FieldElement {
        let mut acc = field.zero();
        for (i, &c) in rs.roots[beta].coroot.iter().enumerate() {
            let term = field.mul(&field.elt(c), &self.values[i]);
            acc = field.add(&acc, &term);
        }
        acc
    }
}

/// `(lambda + rho)(h_beta)` with `rho` realized through `rho(h_i) = 1`.
pub fn pair_lambda_rho(field: &Field, rs: &RootSystem, lambda: &Weight, beta: usize) -> FieldElement {
    let mut acc = field.zero();
    for (i, &c) in rs.roots[beta].coroot.iter().enumerate() {
        let lam_plus_one = field.add(&lambda.values[i], &field.one());
        acc = field.add(&acc, &field.mul(&field.elt(c), &lam_plus_one));
    }
    acc
}

pub fn parse_series(label: &str) -> Option<(Series, Option<usize>)> {
    let label = label.trim();
    let mut chars = label.chars();
    let letter = chars.next()?.to_ascii_uppercase();
    let rest: String = chars.collect();
    let series = match letter {
        'A' => Series::A,
        'B' => Series::B,
        'C' => Series::C,
        'D' => Series::D,
        'G' => Series::G2,
        'F' => Series::F4,
        _ => return None,
    };
    if rest.is_empty() {
        Some((series, None))
    } else {
        rest.parse::<usize>().ok().map(|r| (series, Some(r)))
    }
}
