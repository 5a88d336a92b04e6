use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`,
/// all `d_i >= 0`. `u_inv` is `U⁻¹`, kept alongside for column-span bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries `d_1, …, d_{min(rows, cols)}`, zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

struct State {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl State {
    /// `row[dst] += c · row[src]`, mirrored into `U` and `U⁻¹`.
    fn row_add(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &-c);
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn row_negate(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn col_add(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }
}

/// Nearest-integer quotient, keeping remainders at most half the divisor.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    // the floor remainder has the sign of b; stepping q up moves it toward zero
    if (&r + &r).abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

/// Index in `range` of the entry of least nonzero absolute value.
fn min_nonzero<F>(range: std::ops::Range<usize>, entry: F) -> Option<usize>
where
    F: Fn(usize) -> BigInt,
{
    range
        .filter_map(|k| {
            let x = entry(k);
            (!x.is_zero()).then(|| (x.abs(), k))
        })
        .min()
        .map(|(_, k)| k)
}

/// Zeroes column `t` below the diagonal, always pivoting on the smallest entry.
fn clear_column(st: &mut State, t: usize) {
    let rows = st.d.rows();
    while let Some(i) = min_nonzero(t..rows, |i| st.d[(i, t)].clone()) {
        st.row_swap(t, i);
        let mut clean = true;
        for i in t + 1..rows {
            if st.d[(i, t)].is_zero() {
                continue;
            }
            let q = round_div(&st.d[(i, t)], &st.d[(t, t)]);
            st.row_add(i, t, &-q);
            clean &= st.d[(i, t)].is_zero();
        }
        if clean {
            return;
        }
    }
}

fn clear_row(st: &mut State, t: usize) {
    let cols = st.d.cols();
    while let Some(j) = min_nonzero(t..cols, |j| st.d[(t, j)].clone()) {
        st.col_swap(t, j);
        let mut clean = true;
        for j in t + 1..cols {
            if st.d[(t, j)].is_zero() {
                continue;
            }
            let q = round_div(&st.d[(t, j)], &st.d[(t, t)]);
            st.col_add(j, t, &-q);
            clean &= st.d[(t, j)].is_zero();
        }
        if clean {
            return;
        }
    }
}

/// Smith normal form by Euclidean row and column reduction.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (rows, cols) = (a.rows(), a.cols());
    let mut st = State {
        d: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        let block_is_zero = (t..rows).all(|i| (t..cols).all(|j| st.d[(i, j)].is_zero()));
        if block_is_zero {
            break;
        }
        if let Some(j) = min_nonzero(t..cols, |j| {
            min_nonzero(t..rows, |i| st.d[(i, j)].clone()).map_or(BigInt::zero(), |i| st.d[(i, j)].clone())
        }) {
            st.col_swap(t, j);
        }
        loop {
            clear_column(&mut st, t);
            clear_row(&mut st, t);
            if (t + 1..rows).any(|i| !st.d[(i, t)].is_zero()) {
                continue;
            }
            // d_t must divide the rest of the block
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !st.d[(i, j)].is_multiple_of(&st.d[(t, t)]))
            });
            match offender {
                Some(i) => st.row_add(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if st.d[(t, t)].is_negative() {
            st.row_negate(t);
        }
    }
    SnfResult {
        u: st.u,
        u_inv: st.u_inv,
        d: st.d,
        v: st.v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn check(a: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d, "U A V = D for {a}");
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(a.rows()));
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        assert!(diag.iter().all(|d| !d.is_negative()));
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]) || w[0].is_zero() && w[1].is_zero(), "{diag:?}");
        }
        s
    }

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(check(&IntMatrix::from_i64(&[&[2, 0], &[0, 4]])).diagonal(), big(&[2, 4]));
        assert_eq!(check(&IntMatrix::from_i64(&[&[0, 0], &[0, 0]])).diagonal(), big(&[0, 0]));
        assert_eq!(check(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]])).diagonal(), big(&[2, 4]));
        assert_eq!(check(&IntMatrix::from_i64(&[&[4, 0], &[0, 6]])).diagonal(), big(&[2, 12]));
        assert_eq!(check(&IntMatrix::from_i64(&[&[0, 3, 0]])).diagonal(), big(&[3]));
        assert_eq!(check(&IntMatrix::zeros(0, 3)).diagonal(), big(&[]));
        assert_eq!(check(&IntMatrix::zeros(2, 0)).rank(), 0);
    }

    /// Determinantal divisors: the product d_1⋯d_k is the gcd of k×k minors.
    fn gcd_of_minors(a: &IntMatrix, k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            (0..n)
                .flat_map(|last| {
                    combos(last, k - 1).into_iter().map(move |mut c| {
                        c.push(last);
                        c
                    })
                })
                .collect()
        }
        let mut g = BigInt::zero();
        for rs in combos(a.rows(), k) {
            for cs in combos(a.cols(), k) {
                let minor = IntMatrix::from_rows(
                    rs.iter().map(|&i| cs.iter().map(|&j| a[(i, j)].clone()).collect()).collect(),
                )
                .unwrap();
                g = g.gcd(&minor.determinant().unwrap());
            }
        }
        g
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-50i64..=50, r * c).prop_map(move |xs| {
                IntMatrix::from_rows(xs.chunks(c).map(big).collect()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn snf_is_correct(a in arb_matrix(6)) {
            check(&a);
        }

        #[test]
        fn invariant_factors_match_minors(a in arb_matrix(3)) {
            let diag = smith_normal_form(&a).diagonal();
            let mut prod = BigInt::one();
            for k in 1..=diag.len() {
                prod *= &diag[k - 1];
                prop_assert_eq!(&prod, &gcd_of_minors(&a, k));
            }
        }
    }
}

