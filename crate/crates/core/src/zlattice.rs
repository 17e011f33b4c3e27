//! Exact integer linear algebra: Smith normal form with transform tracking,
//! congruence solving over mixed moduli, Hermite bases for lattice quotients,
//! and invariant-factor decomposition of finite abelian groups.
//!
//! Everything is arbitrary precision; no floating point appears anywhere in
//! this crate. Pivot choices are fixed (smallest nonzero absolute value,
//! row-major tie-break) so all outputs are deterministic.

use std::cmp::Reverse;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::group::{FiniteGroup, GroupHom};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZlatticeError {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: &'static str },
    #[error("moduli must be positive integers")]
    NonPositiveModulus,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("invariant factors must be >= 2 and form a divisibility chain: {factors:?}")]
    InvalidFactors { factors: Vec<i64> },
}

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn diagonal(d: &[BigInt]) -> Self {
        let mut m = Self::zero(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            entries: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    /// Matrix whose columns are the given vectors, each of length `dim`.
    pub fn from_columns(dim: usize, cols: &[Vec<BigInt>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == dim), "ragged columns");
        let mut m = Self::zero(dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, t);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[t] += c * row[s]
    fn add_row_multiple(&mut self, t: usize, s: usize, c: &BigInt) {
        assert_ne!(t, s);
        for j in 0..self.cols {
            let v = self.at(t, j) + c * self.at(s, j);
            self.set(t, j, v);
        }
    }

    /// col[t] += c * col[s]
    fn add_col_multiple(&mut self, t: usize, s: usize, c: &BigInt) {
        assert_ne!(t, s);
        for i in 0..self.rows {
            let v = self.at(i, t) + c * self.at(i, s);
            self.set(i, t, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.at(r, j);
            self.set(r, j, v);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -self.at(i, c);
            self.set(i, c, v);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination; exact.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.at(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                    m.set(i, j, t / &prev);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.at(k, k).clone();
        }
        let d = m.at(n - 1, n - 1).clone();
        if negate {
            -d
        } else {
            d
        }
    }
}

/// Smith normal form S = U * M * V with all four transforms tracked.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s.at(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// First position of the smallest nonzero |entry| in the trailing submatrix
/// starting at (k,k), scanning row-major. Fixed rule keeps outputs stable.
fn pivot_position(s: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..s.rows {
        for j in k..s.cols {
            let e = s.at(i, j);
            if e.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if e.abs() < s.at(bi, bj).abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // Elementary operations applied to S are mirrored into U (rows) or V
    // (columns), with the inverse operation applied on the opposite side of
    // u_inv / v_inv so that u * u_inv = v * v_inv = identity at all times.
    let t = rows.min(cols);
    'diagonal: for k in 0..t {
        loop {
            let Some((pi, pj)) = pivot_position(&s, k) else {
                break 'diagonal; // trailing block is zero; S is finished
            };
            if pi != k {
                s.swap_rows(k, pi);
                u.swap_rows(k, pi);
                u_inv.swap_cols(k, pi);
            }
            if pj != k {
                s.swap_cols(k, pj);
                v.swap_cols(k, pj);
                v_inv.swap_rows(k, pj);
            }
            let mut dirty = false;
            for i in k + 1..rows {
                if s.at(i, k).is_zero() {
                    continue;
                }
                let q = s.at(i, k) / s.at(k, k);
                if !q.is_zero() {
                    let c = -&q;
                    s.add_row_multiple(i, k, &c);
                    u.add_row_multiple(i, k, &c);
                    u_inv.add_col_multiple(k, i, &q);
                }
                if !s.at(i, k).is_zero() {
                    dirty = true; // remainder smaller than the pivot appeared
                }
            }
            if dirty {
                continue;
            }
            for j in k + 1..cols {
                if s.at(k, j).is_zero() {
                    continue;
                }
                let q = s.at(k, j) / s.at(k, k);
                if !q.is_zero() {
                    let c = -&q;
                    s.add_col_multiple(j, k, &c);
                    v.add_col_multiple(j, k, &c);
                    v_inv.add_row_multiple(k, j, &q);
                }
                if !s.at(k, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Row k and column k are clear beyond the pivot. Fold any
            // non-divisible trailing entry into row k and keep reducing;
            // this is what produces the divisibility chain.
            let mut witness = None;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(s.at(i, j) % s.at(k, k)).is_zero() {
                        witness = Some(i);
                        break 'scan;
                    }
                }
            }
            match witness {
                Some(i) => {
                    let one = BigInt::one();
                    let minus_one = -BigInt::one();
                    s.add_row_multiple(k, i, &one);
                    u.add_row_multiple(k, i, &one);
                    u_inv.add_col_multiple(i, k, &minus_one);
                }
                None => break,
            }
        }
    }
    for k in 0..t {
        if s.at(k, k).is_negative() {
            s.negate_row(k);
            u.negate_row(k);
            u_inv.negate_col(k);
        }
    }
    SnfResult { u, s, v, u_inv, v_inv }
}

/// One solution of M*x == b (mod moduli, componentwise) together with
/// generators of the full solution lattice of the homogeneous system.
#[derive(Debug, Clone)]
pub struct SolveModResult {
    pub solution: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

/// Solves M*x == b (mod moduli) by stacking M with diag(moduli) and reading
/// the Smith form: S = U*[M | D]*V turns the congruence into a diagonal one.
/// When all moduli agree, the Smith form of M alone suffices and the stacked
/// matrix is skipped; both paths return the same solution set.
pub fn solve_mod(
    m: &IntMatrix,
    moduli: &[BigInt],
    b: &[BigInt],
) -> Result<Option<SolveModResult>, ZlatticeError> {
    if moduli.len() != m.rows || b.len() != m.rows {
        return Err(ZlatticeError::DimensionMismatch {
            context: "solve_mod needs one modulus and one target entry per row",
        });
    }
    if moduli.iter().any(|d| !d.is_positive()) {
        return Err(ZlatticeError::NonPositiveModulus);
    }
    match moduli.first() {
        None => {
            // No constraints: every x solves, kernel is all of Z^cols.
            return Ok(Some(SolveModResult {
                solution: vec![BigInt::zero(); m.cols],
                kernel: (0..m.cols).map(|i| IntMatrix::identity(m.cols).column(i)).collect(),
            }));
        }
        Some(first) if moduli.iter().all(|d| d == first) => {
            return Ok(solve_mod_uniform(m, first, b));
        }
        _ => {}
    }
    let (rows, cols) = (m.rows, m.cols);
    let mut w = IntMatrix::zero(rows, cols + rows);
    for i in 0..rows {
        for j in 0..cols {
            w.set(i, j, m.at(i, j).clone());
        }
        w.set(i, cols + i, moduli[i].clone());
    }
    let snf = smith_normal_form(&w);
    let c = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); cols + rows];
    for i in 0..rows {
        let d = snf.s.at(i, i);
        if d.is_zero() {
            if !c[i].is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = c[i].div_rem(d);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    let z = snf.v.mul_vec(&y);
    let solution = z[..cols].to_vec();
    let mut kernel = Vec::new();
    for i in 0..cols + rows {
        let free = i >= rows || snf.s.at(i, i).is_zero();
        if free {
            kernel.push((0..cols).map(|r| snf.v.at(r, i).clone()).collect());
        }
    }
    Ok(Some(SolveModResult { solution, kernel }))
}

/// Fast path for a single shared modulus d: with S = U*M*V diagonal, the
/// congruence becomes s_i * y_i == (U*b)_i (mod d) coordinatewise.
fn solve_mod_uniform(m: &IntMatrix, d: &BigInt, b: &[BigInt]) -> Option<SolveModResult> {
    let snf = smith_normal_form(m);
    let c = snf.u.mul_vec(b);
    let (rows, cols) = (m.rows, m.cols);
    let t = rows.min(cols);
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..rows {
        let s = if i < t { snf.s.at(i, i).clone() } else { BigInt::zero() };
        let g = s.gcd(d);
        if !(&c[i] % &g).is_zero() {
            return None;
        }
        if i < t {
            let dp = d / &g;
            if dp > BigInt::one() {
                let sp = (&s / &g).mod_floor(&dp);
                let eg = sp.extended_gcd(&dp);
                debug_assert!(eg.gcd.is_one());
                let inv = eg.x.mod_floor(&dp);
                y[i] = ((&c[i] / &g) * inv).mod_floor(&dp);
            }
        }
    }
    let solution = snf.v.mul_vec(&y);
    let mut kernel = Vec::new();
    for i in 0..cols {
        let s = if i < t { snf.s.at(i, i).clone() } else { BigInt::zero() };
        let mult = d / s.gcd(d);
        kernel.push(snf.v.column(i).iter().map(|v| v * &mult).collect());
    }
    Some(SolveModResult { solution, kernel })
}

/// Column-style Hermite basis of the full-rank lattice spanned by `gens`
/// inside Z^dim: lower triangular, positive diagonal, entries below each
/// diagonal reduced into [0, diag). Returns None when the span has rank < dim.
pub fn hnf_basis(dim: usize, gens: &[Vec<BigInt>]) -> Option<IntMatrix> {
    assert!(gens.iter().all(|g| g.len() == dim), "generator length mismatch");
    let mut work: Vec<Vec<BigInt>> = gens.to_vec();
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
    for row in 0..dim {
        // Invariant: every work column is zero above `row`.
        loop {
            let mut best: Option<usize> = None;
            for (ci, col) in work.iter().enumerate() {
                if col[row].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(ci),
                    Some(b) if col[row].abs() < work[b][row].abs() => Some(ci),
                    keep => keep,
                };
            }
            let p = best?;
            let mut done = true;
            for ci in 0..work.len() {
                if ci == p || work[ci][row].is_zero() {
                    continue;
                }
                let q = &work[ci][row] / &work[p][row];
                if !q.is_zero() {
                    for r in row..dim {
                        let t = &work[ci][r] - &q * &work[p][r];
                        work[ci][r] = t;
                    }
                }
                if !work[ci][row].is_zero() {
                    done = false;
                }
            }
            if done {
                let mut pivot = work.swap_remove(p);
                if pivot[row].is_negative() {
                    for e in pivot.iter_mut() {
                        *e = -std::mem::take(e);
                    }
                }
                basis.push(pivot);
                break;
            }
        }
    }
    // Reduce below-diagonal entries into the canonical box.
    for j in 0..dim {
        for i in j + 1..dim {
            let q = basis[j][i].div_floor(&basis[i][i]);
            if !q.is_zero() {
                let col_i = basis[i].clone();
                for r in i..dim {
                    let t = &basis[j][r] - &q * &col_i[r];
                    basis[j][r] = t;
                }
            }
        }
    }
    let mut h = IntMatrix::zero(dim, dim);
    for (c, col) in basis.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            h.set(r, c, v.clone());
        }
    }
    Some(h)
}

/// Canonical coset representative of x modulo the lattice with Hermite basis
/// h: each coordinate reduced into [0, h[j][j]) in order. This is the
/// lexicographically least nonnegative representative.
pub fn reduce_mod_lattice(x: &[BigInt], h: &IntMatrix) -> Vec<BigInt> {
    let dim = h.rows;
    assert_eq!(x.len(), dim);
    let mut out = x.to_vec();
    for j in 0..dim {
        let q = out[j].div_floor(h.at(j, j));
        if !q.is_zero() {
            for r in j..dim {
                let t = &out[r] - &q * h.at(r, j);
                out[r] = t;
            }
        }
    }
    out
}

/// Forward substitution for lower-triangular h: solves h*c = x exactly,
/// None when x is outside the lattice.
pub fn solve_lower_triangular(h: &IntMatrix, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let dim = h.rows;
    assert_eq!(x.len(), dim);
    let mut c = vec![BigInt::zero(); dim];
    for i in 0..dim {
        let mut acc = x[i].clone();
        for j in 0..i {
            acc -= h.at(i, j) * &c[j];
        }
        let (q, r) = acc.div_rem(h.at(i, i));
        if !r.is_zero() {
            return None;
        }
        c[i] = q;
    }
    Some(c)
}

/// Finite quotient N/D of two full-rank lattices D <= N inside Z^dim, in
/// invariant-factor coordinates. This single presentation drives H^2, kernel,
/// and cokernel computations.
#[derive(Debug, Clone)]
pub struct QuotientPresentation {
    dim: usize,
    basis: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    all_factors: Vec<BigInt>,
    kept: Vec<usize>,
    factors: Vec<BigInt>,
}

impl QuotientPresentation {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Invariant factors >= 2 of the quotient (trivial factors dropped).
    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Coordinates of x in the quotient, reduced mod the factors; None when
    /// x is not in the numerator lattice.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = solve_lower_triangular(&self.basis, x)?;
        let full = self.u.mul_vec(&c);
        Some(
            self.kept
                .iter()
                .map(|&i| full[i].mod_floor(&self.all_factors[i]))
                .collect(),
        )
    }

    /// Ambient vector representing the given quotient coordinates.
    pub fn lift(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.kept.len());
        let mut full = vec![BigInt::zero(); self.dim];
        for (pos, &i) in self.kept.iter().enumerate() {
            full[i] = coords[pos].clone();
        }
        let c = self.u_inv.mul_vec(&full);
        self.basis.mul_vec(&c)
    }

    /// All coordinate tuples, row-major over the factors. Caller is
    /// responsible for knowing the order is small.
    pub fn all_coords(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![Vec::new()];
        for f in &self.factors {
            let f = f.clone();
            let mut next = Vec::new();
            for prefix in &out {
                let mut v = BigInt::zero();
                while v < f {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    next.push(p);
                    v += BigInt::one();
                }
            }
            out = next;
        }
        out
    }
}

/// Builds N/D for full-rank lattices D <= N <= Z^dim given by generators.
/// Panics when the rank or containment preconditions fail; callers in this
/// crate establish both by construction.
pub fn lattice_quotient(
    dim: usize,
    num_gens: &[Vec<BigInt>],
    den_gens: &[Vec<BigInt>],
) -> QuotientPresentation {
    let basis = hnf_basis(dim, num_gens).expect("numerator lattice must have full rank");
    let den_in_basis: Vec<Vec<BigInt>> = den_gens
        .iter()
        .map(|d| {
            solve_lower_triangular(&basis, d)
                .expect("denominator lattice must lie inside the numerator lattice")
        })
        .collect();
    let c = IntMatrix::from_columns(dim, &den_in_basis);
    let snf = smith_normal_form(&c);
    let all_factors = (0..dim)
        .map(|i| {
            let d = if i < snf.s.cols { snf.s.at(i, i).clone() } else { BigInt::zero() };
            assert!(d.is_positive(), "denominator lattice must have full rank");
            d
        })
        .collect::<Vec<_>>();
    let kept: Vec<usize> = (0..dim).filter(|&i| all_factors[i] > BigInt::one()).collect();
    let factors: Vec<BigInt> = kept.iter().map(|&i| all_factors[i].clone()).collect();
    QuotientPresentation {
        dim,
        basis,
        u: snf.u,
        u_inv: snf.u_inv,
        all_factors,
        kept,
        factors,
    }
}

/// Finite abelian group in invariant-factor coordinates: tuples with entry i
/// reduced mod factors[i], factors >= 2 in a divisibility chain. The empty
/// chain is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<i64>,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<i64>) -> Result<Self, ZlatticeError> {
        let chain_ok = factors.iter().all(|&d| d >= 2)
            && factors.windows(2).all(|w| w[1] % w[0] == 0);
        if !chain_ok {
            return Err(ZlatticeError::InvalidFactors { factors });
        }
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product::<i64>() as usize
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.factors.len()]
    }

    pub fn is_zero(&self, v: &[i64]) -> bool {
        v.iter().all(|&x| x == 0)
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter().zip(&self.factors).map(|(&x, &d)| x.rem_euclid(d)).collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((&x, &y), &d)| (x + y).rem_euclid(d))
            .collect()
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        a.iter().zip(&self.factors).map(|(&x, &d)| (-x).rem_euclid(d)).collect()
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((&x, &y), &d)| (x - y).rem_euclid(d))
            .collect()
    }

    /// Mixed-radix index, last coordinate fastest.
    pub fn index_of(&self, t: &[i64]) -> usize {
        t.iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&v, &d)| acc * d as usize + v.rem_euclid(d) as usize)
    }

    pub fn tuple_of(&self, mut idx: usize) -> Vec<i64> {
        let mut t = vec![0i64; self.factors.len()];
        for k in (0..self.factors.len()).rev() {
            let d = self.factors[k] as usize;
            t[k] = (idx % d) as i64;
            idx /= d;
        }
        t
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.order()).map(|i| self.tuple_of(i))
    }

    /// The same group as a Cayley table (element order = index order).
    pub fn cayley(&self) -> FiniteGroup {
        let n = self.order();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                let a = self.tuple_of(i);
                (0..n)
                    .map(|j| self.index_of(&self.add(&a, &self.tuple_of(j))))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(&table).expect("coordinate group is a group")
    }
}

/// Invariant factors of an abelian Cayley-table group by order counting:
/// the counts #{x : m*x = 0} for all m determine the type uniquely. Fully
/// independent of the SNF path; used as a cross-check.
pub fn abelian_invariants_by_counting(g: &FiniteGroup) -> Option<Vec<i64>> {
    if !g.is_abelian() {
        return None;
    }
    let n = g.order();
    let count_killed = |m: usize| -> usize {
        (0..n).filter(|&x| g.pow(x, m as i64) == 0).count()
    };
    let target: Vec<usize> = (1..=n).map(count_killed).collect();
    let mut chains: Vec<Vec<i64>> = Vec::new();
    // Chains d_1 | ... | d_k with product n, built from the top factor down.
    fn build(n: usize, cap: usize, suffix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 1 {
            let mut chain: Vec<i64> = suffix.clone();
            chain.reverse();
            out.push(chain);
            return;
        }
        for d in 2..=n.min(cap) {
            if n % d == 0 && cap % d == 0 {
                suffix.push(d as i64);
                build(n / d, d, suffix, out);
                suffix.pop();
            }
        }
    }
    let mut suffix = Vec::new();
    build(n, n, &mut suffix, &mut chains);
    if n == 1 {
        chains = vec![Vec::new()];
    }
    chains.into_iter().find(|chain| {
        (1..=n).all(|m| {
            let predicted: usize = chain.iter().map(|&d| num_integer::gcd(m, d as usize)).product();
            predicted == target[m - 1]
        })
    })
}

/// Decomposes an abelian group into invariant factors with explicit mutually
/// inverse isomorphisms to the coordinate group. Generators are chosen
/// greedily by maximal order; the relation matrix of that polycyclic sequence
/// goes through Smith normal form.
pub fn abelian_structure(
    g: &Arc<FiniteGroup>,
) -> Result<(FiniteAbelianGroup, GroupHom, GroupHom), ZlatticeError> {
    if !g.is_abelian() {
        return Err(ZlatticeError::NotAbelian);
    }
    let n = g.order();
    let mut gens: Vec<usize> = Vec::new();
    let mut rel_c: Vec<Vec<i64>> = Vec::new();
    let mut rel_m: Vec<i64> = Vec::new();
    let mut coord: Vec<Option<Vec<i64>>> = vec![None; n];
    coord[0] = Some(Vec::new());
    let mut members: Vec<usize> = vec![0];
    while members.len() < n {
        let pick = g
            .elements()
            .filter(|&x| coord[x].is_none())
            .max_by_key(|&x| (g.element_order(x), Reverse(x)))
            .expect("not yet generated");
        let mut acc = pick;
        let mut m = 1i64;
        while coord[acc].is_none() {
            acc = g.mul(acc, pick);
            m += 1;
        }
        let c = coord[acc].clone().expect("loop exit condition");
        for &h in &members {
            coord[h].as_mut().expect("member has coordinates").push(0);
        }
        let snapshot = members.clone();
        let k = gens.len();
        let mut power = 0usize;
        for t in 1..m {
            power = g.mul(power, pick);
            for &h in &snapshot {
                let e = g.mul(h, power);
                let mut cc = coord[h].clone().expect("member has coordinates");
                cc[k] = t;
                debug_assert!(coord[e].is_none());
                coord[e] = Some(cc);
                members.push(e);
            }
        }
        gens.push(pick);
        rel_c.push(c);
        rel_m.push(m);
    }
    let k = gens.len();
    // Relation lattice: column i says m_i * gen_i = sum_j c_ij * gen_j.
    let mut r = IntMatrix::zero(k, k);
    for i in 0..k {
        for (j, &cj) in rel_c[i].iter().enumerate() {
            r.set(j, i, BigInt::from(-cj));
        }
        let t = r.at(i, i) + BigInt::from(rel_m[i]);
        r.set(i, i, t);
    }
    let snf = smith_normal_form(&r);
    let diag = snf.diagonal();
    debug_assert_eq!(
        diag.iter().product::<BigInt>(),
        BigInt::from(n),
        "relation lattice index must equal the group order"
    );
    let kept: Vec<usize> = (0..k).filter(|&i| diag[i] > BigInt::one()).collect();
    let factors: Vec<i64> = kept
        .iter()
        .map(|&i| i64::try_from(&diag[i]).expect("factor fits in i64"))
        .collect();
    let fab = FiniteAbelianGroup::new(factors)?;
    if cfg!(debug_assertions) && n <= 64 {
        debug_assert_eq!(
            abelian_invariants_by_counting(g),
            Some(fab.factors().to_vec()),
            "SNF invariants disagree with the counting oracle"
        );
    }
    let carrier = Arc::new(fab.cayley());

    let to_tuple = |x: usize| -> Vec<i64> {
        let mut full = coord[x].clone().expect("every element has coordinates");
        full.resize(k, 0);
        let v: Vec<BigInt> = full.into_iter().map(BigInt::from).collect();
        let w = snf.u.mul_vec(&v);
        kept.iter()
            .map(|&i| {
                i64::try_from(&w[i].mod_floor(&diag[i])).expect("reduced coordinate fits")
            })
            .collect()
    };
    let map_to: Vec<usize> = g.elements().map(|x| fab.index_of(&to_tuple(x))).collect();
    let to_coords = GroupHom::new(g, &carrier, map_to).expect("coordinate map is an isomorphism");

    let map_from: Vec<usize> = (0..fab.order())
        .map(|idx| {
            let tuple = fab.tuple_of(idx);
            let mut full = vec![BigInt::zero(); k];
            for (pos, &i) in kept.iter().enumerate() {
                full[i] = BigInt::from(tuple[pos]);
            }
            let v = snf.u_inv.mul_vec(&full);
            let mut x = 0usize;
            for (j, vj) in v.iter().enumerate() {
                let ord = BigInt::from(g.element_order(gens[j]));
                let e = i64::try_from(&vj.mod_floor(&ord)).expect("exponent fits");
                x = g.mul(x, g.pow(gens[j], e));
            }
            x
        })
        .collect();
    let from_coords =
        GroupHom::new(&carrier, g, map_from).expect("inverse coordinate map is an isomorphism");
    for x in g.elements() {
        assert_eq!(
            from_coords.apply(to_coords.apply(x)),
            x,
            "coordinate maps must be mutually inverse"
        );
    }
    Ok((fab, to_coords, from_coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn check_snf(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.s, "U*M*V != S");
        assert_eq!(snf.u.det().abs(), BigInt::one(), "U not unimodular");
        assert_eq!(snf.v.det().abs(), BigInt::one(), "V not unimodular");
        assert_eq!(snf.u.mul(&snf.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(m.cols()));
        let d = snf.diagonal();
        for i in 0..d.len() {
            for j in 0..d.len() {
                if i < j {
                    assert!(
                        d[j].is_zero() || (!d[i].is_zero() && (&d[j] % &d[i]).is_zero()),
                        "divisibility chain broken: {:?}",
                        d
                    );
                }
            }
            assert!(!d[i].is_negative());
        }
        // off-diagonal of S is zero
        for r in 0..snf.s.rows() {
            for c in 0..snf.s.cols() {
                if r != c {
                    assert!(snf.s.at(r, c).is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_identity_and_zero() {
        check_snf(&IntMatrix::identity(2));
        let zero = IntMatrix::from_rows(&[vec![0]]);
        let snf = smith_normal_form(&zero);
        assert_eq!(snf.s, zero);
        check_snf(&zero);
        check_snf(&IntMatrix::zero(0, 3));
        check_snf(&IntMatrix::zero(2, 0));
    }

    #[test]
    fn snf_known_invariant_factors() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        check_snf(&m);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), vec![big(2), big(4)]);
        // d1 = gcd of entries, d1*d2 = |det|
        assert_eq!(m.det().abs(), big(8));
    }

    #[test]
    fn det_matches_expansion_on_samples() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        assert_eq!(m.det(), big(-3));
        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(singular.det(), big(0));
    }

    #[test]
    fn solve_mod_spec_examples() {
        // single unit equation
        let r = solve_mod(&IntMatrix::from_rows(&[vec![1]]), &[big(5)], &[big(3)])
            .unwrap()
            .unwrap();
        assert_eq!(r.solution[0].mod_floor(&big(5)), big(3));
        // 2x = 1 mod 4 unsolvable
        let none = solve_mod(&IntMatrix::from_rows(&[vec![2]]), &[big(4)], &[big(1)]).unwrap();
        assert!(none.is_none());
        // 2x = 0 mod 4: solutions are even numbers
        let r = solve_mod(&IntMatrix::from_rows(&[vec![2]]), &[big(4)], &[big(0)])
            .unwrap()
            .unwrap();
        assert!(r.solution[0].mod_floor(&big(4)).is_even() || r.solution[0].is_zero());
        // the kernel together with the unknown's modulus generates exactly 2Z
        let mut gens = r.kernel.clone();
        gens.push(vec![big(4)]);
        let h = hnf_basis(1, &gens).unwrap();
        assert_eq!(*h.at(0, 0), big(2));
    }

    #[test]
    fn solve_mod_dimension_errors() {
        let err = solve_mod(&IntMatrix::from_rows(&[vec![1]]), &[big(5), big(5)], &[big(3)]);
        assert!(matches!(err, Err(ZlatticeError::DimensionMismatch { .. })));
        let err = solve_mod(&IntMatrix::from_rows(&[vec![1]]), &[big(0)], &[big(0)]);
        assert!(matches!(err, Err(ZlatticeError::NonPositiveModulus)));
    }

    #[test]
    fn solve_mod_agrees_with_exhaustive_search() {
        // Small systems where every x in [0, lcm)^cols can be checked.
        let cases: Vec<(Vec<Vec<i64>>, Vec<i64>, Vec<i64>)> = vec![
            (vec![vec![2, 3], vec![1, 1]], vec![4, 2], vec![1, 0]),
            (vec![vec![2, 3], vec![1, 1]], vec![4, 2], vec![3, 1]),
            (vec![vec![2, 0], vec![0, 3]], vec![4, 9], vec![2, 6]),
            (vec![vec![1, 2, 3]], vec![6], vec![4]),
            (vec![vec![3]], vec![6], vec![2]),
            (vec![vec![4, 2]], vec![8], vec![6]),
        ];
        for (m_rows, moduli, b) in cases {
            let m = IntMatrix::from_rows(&m_rows);
            let moduli_b: Vec<BigInt> = moduli.iter().map(|&x| big(x)).collect();
            let b_b: Vec<BigInt> = b.iter().map(|&x| big(x)).collect();
            let result = solve_mod(&m, &moduli_b, &b_b).unwrap();
            let lcm = moduli.iter().fold(1i64, |a, &x| num_integer::lcm(a, x));
            let cols = m.cols();
            let total = (lcm as usize).pow(cols as u32);
            let mut found: Vec<Vec<i64>> = Vec::new();
            for idx in 0..total {
                let mut x = vec![0i64; cols];
                let mut rem = idx;
                for xc in x.iter_mut() {
                    *xc = (rem % lcm as usize) as i64;
                    rem /= lcm as usize;
                }
                let ok = (0..m.rows()).all(|r| {
                    let s: i64 = (0..cols)
                        .map(|c| i64::try_from(m.at(r, c)).unwrap() * x[c])
                        .sum();
                    (s - b[r]).rem_euclid(moduli[r]) == 0
                });
                if ok {
                    found.push(x);
                }
            }
            match result {
                None => assert!(found.is_empty(), "solver missed solutions {found:?}"),
                Some(sol) => {
                    assert!(!found.is_empty(), "solver invented a solution");
                    // returned solution actually solves
                    for r in 0..m.rows() {
                        let s: BigInt = (0..cols).map(|c| m.at(r, c) * &sol.solution[c]).sum();
                        assert!(((s - big(b[r])) % big(moduli[r])).is_zero());
                    }
                    // every exhaustive solution lies in solution + kernel lattice
                    let mut gens = sol.kernel.clone();
                    for c in 0..cols {
                        let mut v = vec![BigInt::zero(); cols];
                        v[c] = big(lcm);
                        gens.push(v);
                    }
                    let h = hnf_basis(cols, &gens).unwrap();
                    for x in &found {
                        let diff: Vec<BigInt> =
                            (0..cols).map(|c| big(x[c]) - &sol.solution[c]).collect();
                        assert!(
                            solve_lower_triangular(&h, &diff).is_some(),
                            "solution {x:?} outside returned lattice"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn hnf_and_coset_reduction() {
        let gens = vec![vec![big(2), big(1)], vec![big(0), big(3)]];
        let h = hnf_basis(2, &gens).unwrap();
        assert_eq!(*h.at(0, 0), big(2));
        assert_eq!(*h.at(0, 1), big(0));
        assert_eq!(*h.at(1, 1), big(3));
        let r = reduce_mod_lattice(&[big(5), big(7)], &h);
        assert!(r[0] >= BigInt::zero() && r[0] < big(2));
        assert!(r[1] >= BigInt::zero() && r[1] < big(3));
        // reduction is a coset representative: difference solves exactly
        let diff = vec![big(5) - &r[0], big(7) - &r[1]];
        assert!(solve_lower_triangular(&h, &diff).is_some());
        // rank-deficient spans are rejected
        assert!(hnf_basis(2, &[vec![big(1), big(2)]]).is_none());
    }

    #[test]
    fn lattice_quotient_z_mod_6_and_z2xz4() {
        let q = lattice_quotient(1, &[vec![big(1)]], &[vec![big(6)]]);
        assert_eq!(q.factors(), &[big(6)]);
        let q2 = lattice_quotient(
            2,
            &[vec![big(1), big(0)], vec![big(0), big(1)]],
            &[vec![big(2), big(0)], vec![big(0), big(4)]],
        );
        assert_eq!(q2.factors(), &[big(2), big(4)]);
        // coords are a homomorphism and lift is a section
        let a = q2.coords(&[big(1), big(1)]).unwrap();
        let b = q2.coords(&[big(1), big(3)]).unwrap();
        let sum = q2.coords(&[big(2), big(4)]).unwrap();
        let manual: Vec<BigInt> = a
            .iter()
            .zip(&b)
            .zip(q2.factors())
            .map(|((x, y), f)| (x + y).mod_floor(f))
            .collect();
        assert_eq!(sum, manual);
        for coords in q2.all_coords() {
            let lifted = q2.lift(&coords);
            assert_eq!(q2.coords(&lifted).unwrap(), coords);
        }
        assert_eq!(q2.all_coords().len(), 8);
    }

    #[test]
    fn abelian_structure_examples() {
        let (fab, _, _) = abelian_structure(&Arc::new(catalog::cyclic(1))).unwrap();
        assert!(fab.factors().is_empty());
        let (fab, _, _) = abelian_structure(&Arc::new(catalog::cyclic(6))).unwrap();
        assert_eq!(fab.factors(), &[6]);
        let (fab, _, _) = abelian_structure(&Arc::new(catalog::klein_four())).unwrap();
        assert_eq!(fab.factors(), &[2, 2]);
        let err = abelian_structure(&Arc::new(catalog::symmetric_3()));
        assert!(matches!(err, Err(ZlatticeError::NotAbelian)));
    }

    #[test]
    fn abelian_structure_matches_counting_oracle() {
        let samples = vec![
            catalog::abelian(&[4, 2]),
            catalog::abelian(&[2, 2, 2]),
            catalog::abelian(&[3, 9]),
            catalog::abelian(&[2, 3, 4]),
            catalog::abelian(&[12]),
            catalog::abelian(&[6, 2]),
        ];
        for g in samples {
            let g = Arc::new(g);
            let (fab, to, from) = abelian_structure(&g).unwrap();
            assert_eq!(
                abelian_invariants_by_counting(&g).unwrap(),
                fab.factors().to_vec()
            );
            assert_eq!(fab.order(), g.order());
            for x in g.elements() {
                assert_eq!(from.apply(to.apply(x)), x);
            }
            for y in 0..fab.order() {
                assert_eq!(to.apply(from.apply(y)), y);
            }
        }
    }

    #[test]
    fn finite_abelian_group_indexing_round_trips() {
        let fab = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        assert_eq!(fab.order(), 8);
        for i in 0..8 {
            assert_eq!(fab.index_of(&fab.tuple_of(i)), i);
        }
        assert!(FiniteAbelianGroup::new(vec![4, 2]).is_err());
        assert!(FiniteAbelianGroup::new(vec![1]).is_err());
        assert!(FiniteAbelianGroup::new(vec![2, 3]).is_err());
        let t = FiniteAbelianGroup::trivial();
        assert_eq!(t.order(), 1);
        assert_eq!(t.cayley().order(), 1);
    }

    proptest! {
        #[test]
        fn snf_invariants_hold_for_random_matrices(
            rows in 1usize..=5,
            cols in 1usize..=5,
            seed in proptest::collection::vec(-10i64..=10, 25),
        ) {
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|r| (0..cols).map(|c| seed[r * 5 + c]).collect())
                .collect();
            check_snf(&IntMatrix::from_rows(&data));
        }

        #[test]
        fn solve_mod_solution_always_verifies(
            cols in 1usize..=3,
            entries in proptest::collection::vec(-6i64..=6, 9),
            moduli in proptest::collection::vec(1i64..=9, 3),
            target in proptest::collection::vec(0i64..=8, 3),
        ) {
            let rows = 3;
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|r| (0..cols).map(|c| entries[r * 3 + c]).collect())
                .collect();
            let m = IntMatrix::from_rows(&data);
            let mods: Vec<BigInt> = moduli.iter().map(|&x| big(x)).collect();
            let b: Vec<BigInt> = target.iter().zip(&moduli).map(|(&x, &d)| big(x % d)).collect();
            if let Some(sol) = solve_mod(&m, &mods, &b).unwrap() {
                for r in 0..rows {
                    let s: BigInt = (0..cols).map(|c| m.at(r, c) * &sol.solution[c]).sum();
                    prop_assert!(((s - &b[r]) % &mods[r]).is_zero());
                }
                for k in &sol.kernel {
                    for r in 0..rows {
                        let s: BigInt = (0..cols).map(|c| m.at(r, c) * &k[c]).sum();
                        prop_assert!((s % &mods[r]).is_zero());
                    }
                }
            }
        }
    }
}
