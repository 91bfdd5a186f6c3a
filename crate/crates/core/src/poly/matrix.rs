use super::Poly;
use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Determinant of a square polynomial matrix by fraction-free (Bareiss)
/// elimination with row pivoting. Every division is exact over a field.
pub fn det_polymatrix<T: Coeff>(m: &[Vec<Poly<T>>]) -> Result<Poly<T>> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: row.len(),
        });
    }
    if n == 0 {
        return Ok(Poly::one());
    }
    let mut a: Vec<Vec<Poly<T>>> = m.to_vec();
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(Poly::zero());
            };
            a.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v.divmod(&prev)?.0;
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::QPoly;
    use proptest::prelude::*;

    fn cofactor(m: &[Vec<QPoly>]) -> QPoly {
        if m.is_empty() {
            return QPoly::one();
        }
        let mut acc = QPoly::zero();
        for (j, a) in m[0].iter().enumerate() {
            let minor: Vec<Vec<QPoly>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = a * &cofactor(&minor);
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    #[test]
    fn small_determinants() {
        let nz = QPoly::from_ints(&[0, -1]);
        let one = QPoly::one();
        let m = vec![vec![nz.clone(), one.clone()], vec![one.clone(), nz.clone()]];
        assert_eq!(det_polymatrix(&m).unwrap(), QPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(det_polymatrix(&[vec![nz.clone()]]).unwrap(), nz);
        let star = vec![
            vec![QPoly::from_ints(&[0, -2]), one.clone(), one.clone()],
            vec![one.clone(), nz.clone(), QPoly::zero()],
            vec![one.clone(), QPoly::zero(), nz.clone()],
        ];
        assert_eq!(det_polymatrix(&star).unwrap(), QPoly::from_ints(&[0, 2, 0, -2]));
        assert_eq!(cofactor(&star), QPoly::from_ints(&[0, 2, 0, -2]));
        assert!(matches!(
            det_polymatrix(&[vec![one.clone(), one]]),
            Err(Error::NotSquare { rows: 1, cols: 2 })
        ));
    }

    #[test]
    fn zero_pivot_needs_a_swap() {
        let o = QPoly::one();
        let z = QPoly::zero();
        let m = vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]];
        assert_eq!(det_polymatrix(&m).unwrap(), -o);
    }

    fn poly_matrix() -> impl Strategy<Value = Vec<Vec<QPoly>>> {
        (1usize..=5).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(prop::collection::vec(-3i64..=3, 0..3), n), n)
                .prop_map(|rows| {
                    rows.into_iter()
                        .map(|r| r.into_iter().map(|c| QPoly::from_ints(&c)).collect())
                        .collect()
                })
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_expansion(m in poly_matrix()) {
            prop_assert_eq!(det_polymatrix(&m).unwrap(), cofactor(&m));
        }
    }
}
