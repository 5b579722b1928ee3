use num_complex::Complex64;

/// Determinant of a square matrix (row-major) by Gaussian elimination with
/// partial pivoting.
pub fn determinant(matrix: &[Vec<Complex64>]) -> Complex64 {
    let n = matrix.len();
    let mut a: Vec<Vec<Complex64>> = matrix.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))
            .unwrap();
        if a[p][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let m = a[i][k] / a[k][k];
            for j in k..n {
                let s = a[k][j];
                a[i][j] -= m * s;
            }
        }
    }
    det
}
