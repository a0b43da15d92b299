//! Symplectic matrices, block decompositions, generators, and quadratic
//! Hamiltonian flows.
//!
//! Flows are exposed as presets (harmonic rotation, free-particle shear,
//! uniform magnetic potential) plus a generic matrix exponential of an
//! element of the symplectic algebra.  Residuals are reported, never
//! silently corrected.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};

pub const SYMPLECTIC_TOL: f64 = 1e-10;
pub const EXP_FLOW_TOL: f64 = 1e-8;

/// 2d×2d real matrix S with SᵀJS = J.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    d: usize,
    m: DMatrix<f64>,
}

/// d×d blocks (A B; C D) of a symplectic matrix.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

/// Element X of the symplectic algebra: XᵀJ + JX = 0, so e^{tX} ∈ Sp(d,ℝ).
#[derive(Debug, Clone)]
pub struct HamiltonianGenerator {
    d: usize,
    x: DMatrix<f64>,
}

fn j_matrix(d: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        j[(i, d + i)] = 1.0;
        j[(d + i, i)] = -1.0;
    }
    j
}

/// Max-norm residual of SᵀJS - J.
pub fn symplectic_residual(m: &DMatrix<f64>) -> f64 {
    let d = m.nrows() / 2;
    let j = j_matrix(d);
    let r = m.transpose() * &j * m - &j;
    r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Whether the matrix satisfies SᵀJS = J within `tol` in max norm.
pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> bool {
    m.nrows() == m.ncols() && m.nrows() % 2 == 0 && symplectic_residual(m) <= tol
}

impl SymplecticMatrix {
    /// Validates the symplectic relation at `tol` and det S = 1 at 1e-8.
    pub fn new(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() % 2 != 0 || m.nrows() == 0 {
            return Err(Error::BadShape {
                rows: m.nrows(),
                cols: m.ncols(),
                what: "expected square 2d x 2d".into(),
            });
        }
        let residual = symplectic_residual(&m);
        if residual > tol {
            return Err(Error::NotSymplectic { residual, tol });
        }
        let det = m.determinant();
        if (det - 1.0).abs() > 1e-8 {
            return Err(Error::NotSymplectic { residual: (det - 1.0).abs(), tol: 1e-8 });
        }
        Ok(Self { d: m.nrows() / 2, m })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn identity(d: usize) -> Self {
        Self { d, m: DMatrix::identity(2 * d, 2 * d) }
    }

    /// d×d block decomposition (A B; C D).
    pub fn blocks(&self) -> BlockDecomposition {
        let d = self.d;
        BlockDecomposition {
            a: self.m.view((0, 0), (d, d)).into(),
            b: self.m.view((0, d), (d, d)).into(),
            c: self.m.view((d, 0), (d, d)).into(),
            d: self.m.view((d, d), (d, d)).into(),
        }
    }

    /// Exact symplectic inverse S⁻¹ = J⁻¹SᵀJ.
    pub fn inverse(&self) -> SymplecticMatrix {
        let j = j_matrix(self.d);
        let jinv = -&j; // J⁻¹ = -J
        SymplecticMatrix { d: self.d, m: jinv * self.m.transpose() * j }
    }

    pub fn compose(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.d != other.d {
            return Err(Error::BadShape {
                rows: 2 * self.d,
                cols: 2 * other.d,
                what: "dimension mismatch in composition".into(),
            });
        }
        // products of symplectic matrices drift only by roundoff
        Ok(SymplecticMatrix { d: self.d, m: &self.m * &other.m })
    }

    /// Apply to a phase-space point (x.., xi..) of length 2d.
    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        let v = nalgebra::DVector::from_column_slice(z);
        (&self.m * v).as_slice().to_vec()
    }

    pub fn det_a(&self) -> f64 {
        self.blocks().a.determinant()
    }
}

impl BlockDecomposition {
    /// Validity of the relations used with invertible A: CA⁻¹, A⁻¹B symmetric
    /// and D = CA⁻¹B + A⁻ᵀ.  Returns the max residual, or None when A is
    /// numerically singular.
    pub fn upper_block_residual(&self) -> Option<f64> {
        let ainv = self.a.clone().try_inverse()?;
        let ca = &self.c * &ainv;
        let ab = &ainv * &self.b;
        let sym = |m: &DMatrix<f64>| {
            (m - m.transpose()).iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
        };
        let drel = &self.d - (&ca * &self.b + ainv.transpose());
        let r = sym(&ca).max(sym(&ab)).max(drel.iter().fold(0.0f64, |a, v| a.max(v.abs())));
        Some(r)
    }

    pub fn assemble(&self) -> DMatrix<f64> {
        let d = self.a.nrows();
        let mut m = DMatrix::zeros(2 * d, 2 * d);
        m.view_mut((0, 0), (d, d)).copy_from(&self.a);
        m.view_mut((0, d), (d, d)).copy_from(&self.b);
        m.view_mut((d, 0), (d, d)).copy_from(&self.c);
        m.view_mut((d, d), (d, d)).copy_from(&self.d);
        m
    }
}

impl HamiltonianGenerator {
    /// Requires XᵀJ + JX = 0 to 1e-10 in max norm.
    pub fn new(x: DMatrix<f64>) -> Result<Self> {
        if x.nrows() != x.ncols() || x.nrows() % 2 != 0 || x.nrows() == 0 {
            return Err(Error::BadShape {
                rows: x.nrows(),
                cols: x.ncols(),
                what: "expected square 2d x 2d".into(),
            });
        }
        let d = x.nrows() / 2;
        let j = j_matrix(d);
        let r = x.transpose() * &j + &j * &x;
        let residual = r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if residual > 1e-10 {
            return Err(Error::NotInAlgebra { residual });
        }
        Ok(Self { d, x })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }
}

/// The standard symplectic matrix J = (0 I; -I 0).
pub fn standard_j(d: usize) -> SymplecticMatrix {
    SymplecticMatrix { d, m: j_matrix(d) }
}

/// V_C = (I 0; C I) for symmetric C.
pub fn make_vc(c: &DMatrix<f64>) -> Result<SymplecticMatrix> {
    let d = c.nrows();
    if c.ncols() != d {
        return Err(Error::BadShape { rows: c.nrows(), cols: c.ncols(), what: "C must be square".into() });
    }
    let asym = (c - c.transpose()).iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if asym > 1e-10 {
        return Err(Error::InvalidArgument(format!("C not symmetric: residual {asym:.3e}")));
    }
    let mut m = DMatrix::identity(2 * d, 2 * d);
    m.view_mut((d, 0), (d, d)).copy_from(c);
    SymplecticMatrix::new(m, SYMPLECTIC_TOL)
}

/// 𝒟_E = (E⁻¹ 0; 0 Eᵀ) for invertible E.
pub fn make_de(e: &DMatrix<f64>) -> Result<SymplecticMatrix> {
    let d = e.nrows();
    if e.ncols() != d {
        return Err(Error::BadShape { rows: e.nrows(), cols: e.ncols(), what: "E must be square".into() });
    }
    let det = e.determinant();
    if det.abs() < 1e-14 {
        return Err(Error::Singular { det });
    }
    let einv = e.clone().try_inverse().ok_or(Error::Singular { det })?;
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    m.view_mut((0, 0), (d, d)).copy_from(&einv);
    m.view_mut((d, d), (d, d)).copy_from(&e.transpose());
    SymplecticMatrix::new(m, SYMPLECTIC_TOL)
}

/// Harmonic-oscillator flow: blocks ((cos t)I, (-sin t)I; (sin t)I, (cos t)I).
pub fn harmonic_flow(d: usize, t: f64) -> SymplecticMatrix {
    let (s, c) = t.sin_cos();
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        m[(i, i)] = c;
        m[(i, d + i)] = -s;
        m[(d + i, i)] = s;
        m[(d + i, d + i)] = c;
    }
    SymplecticMatrix { d, m }
}

/// Free-particle flow S_t(y,η) = (y + tη, η): blocks (I tI; 0 I).
pub fn free_particle_flow(d: usize, t: f64) -> SymplecticMatrix {
    let mut m = DMatrix::identity(2 * d, 2 * d);
    for i in 0..d {
        m[(i, d + i)] = t;
    }
    SymplecticMatrix { d, m }
}

fn check_skew_orthogonal(b: &DMatrix<f64>) -> Result<()> {
    let skew = (b + b.transpose()).iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let orth = (b.transpose() * b - DMatrix::identity(b.nrows(), b.ncols()))
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()));
    if skew > 1e-10 || orth > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "B must satisfy Bᵀ = -B and BᵀB = I (residuals {skew:.3e}, {orth:.3e})"
        )));
    }
    Ok(())
}

/// Closed-form flow of the uniform magnetic potential A(x) = mωBx:
///
/// S_t = ½ ( (1+cos 2ωt)I + sin(2ωt)B,  (1/(mω))[(1-cos 2ωt)B + sin(2ωt)I] ;
///          -mω[(1-cos 2ωt)B + sin(2ωt)I],  (1+cos 2ωt)I + sin(2ωt)B )
pub fn magnetic_flow(t: f64, mass: f64, omega: f64, b: &DMatrix<f64>) -> Result<SymplecticMatrix> {
    if !(mass > 0.0) || !(omega > 0.0) {
        return Err(Error::InvalidArgument("mass and omega must be > 0".into()));
    }
    check_skew_orthogonal(b)?;
    let d = b.nrows();
    let eye = DMatrix::<f64>::identity(d, d);
    let (s2, c2) = (2.0 * omega * t).sin_cos();
    let diag = (&eye * (1.0 + c2) + b * s2) * 0.5;
    let off = (b * (1.0 - c2) + &eye * s2) * 0.5;
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    m.view_mut((0, 0), (d, d)).copy_from(&diag);
    m.view_mut((0, d), (d, d)).copy_from(&(&off / (mass * omega)));
    m.view_mut((d, 0), (d, d)).copy_from(&(&off * (-mass * omega)));
    m.view_mut((d, d), (d, d)).copy_from(&diag);
    SymplecticMatrix::new(m, SYMPLECTIC_TOL)
}

/// Generator X = JM of the uniform magnetic Hamiltonian, M = (mω²I -ωB; ωB I/m).
pub fn magnetic_generator(mass: f64, omega: f64, b: &DMatrix<f64>) -> Result<HamiltonianGenerator> {
    check_skew_orthogonal(b)?;
    let d = b.nrows();
    let eye = DMatrix::<f64>::identity(d, d);
    let mut x = DMatrix::zeros(2 * d, 2 * d);
    x.view_mut((0, 0), (d, d)).copy_from(&(b * omega));
    x.view_mut((0, d), (d, d)).copy_from(&(&eye / mass));
    x.view_mut((d, 0), (d, d)).copy_from(&(&eye * (-mass * omega * omega)));
    x.view_mut((d, d), (d, d)).copy_from(&(b * omega));
    HamiltonianGenerator::new(x)
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub(crate) fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs())) * n as f64;
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / 2f64.powi(s as i32);
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / k as f64;
        result += &term;
        if term.iter().fold(0.0f64, |acc, v| acc.max(v.abs())) < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// e^{tX} for a generator of the symplectic algebra.
///
/// The result must pass the symplectic check at 1e-8; the residual is
/// reported, not corrected.
pub fn exp_flow(x: &HamiltonianGenerator, t: f64) -> Result<SymplecticMatrix> {
    let m = expm(&(x.matrix() * t));
    let residual = symplectic_residual(&m);
    if residual > EXP_FLOW_TOL {
        return Err(Error::NotSymplectic { residual, tol: EXP_FLOW_TOL });
    }
    Ok(SymplecticMatrix { d: x.d, m })
}

/// π^{Mp}(ℱ₂) as a 4d×4d symplectic matrix (identity on the first factor,
/// J on the second).
pub fn ft2_matrix(d: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(4 * d, 4 * d);
    let eye = DMatrix::<f64>::identity(d, d);
    a.view_mut((0, 0), (d, d)).copy_from(&eye);
    a.view_mut((d, 3 * d), (d, d)).copy_from(&eye);
    a.view_mut((2 * d, 2 * d), (d, d)).copy_from(&eye);
    a.view_mut((3 * d, d), (d, d)).copy_from(&(-&eye));
    a
}

/// Symplectic projection U of ℱ₂⁻¹ 𝔗_M ℱ₂ for invertible 2d×2d M.
///
/// With M⁻¹ = (M₁₁ M₁₂; M₂₁ M₂₂) and Mᵀ = (M'₁₁ M'₁₂; M'₂₁ M'₂₂) the blocks
/// assemble as
///
///   U = ( M₁₁    0     0    M₁₂
///          0    M'₂₂ -M'₂₁   0
///          0   -M'₁₂  M'₁₁   0
///         M₂₁    0     0    M₂₂ ),
///
/// which equals A_FT2⁻¹ · diag(M⁻¹, Mᵀ) · A_FT2 by direct multiplication.
pub fn ft2_conjugation(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() || m.nrows() % 2 != 0 {
        return Err(Error::BadShape { rows: m.nrows(), cols: m.ncols(), what: "M must be 2d x 2d".into() });
    }
    let d = m.nrows() / 2;
    let det = m.determinant();
    let minv = m.clone().try_inverse().ok_or(Error::Singular { det })?;
    let mt = m.transpose();
    let blk = |src: &DMatrix<f64>, i: usize, j: usize| -> DMatrix<f64> {
        src.view((i * d, j * d), (d, d)).into()
    };
    let mut u = DMatrix::zeros(4 * d, 4 * d);
    u.view_mut((0, 0), (d, d)).copy_from(&blk(&minv, 0, 0));
    u.view_mut((0, 3 * d), (d, d)).copy_from(&blk(&minv, 0, 1));
    u.view_mut((d, d), (d, d)).copy_from(&blk(&mt, 1, 1));
    u.view_mut((d, 2 * d), (d, d)).copy_from(&(-blk(&mt, 1, 0)));
    u.view_mut((2 * d, d), (d, d)).copy_from(&(-blk(&mt, 0, 1)));
    u.view_mut((2 * d, 2 * d), (d, d)).copy_from(&blk(&mt, 0, 0));
    u.view_mut((3 * d, 0), (d, d)).copy_from(&blk(&minv, 1, 0));
    u.view_mut((3 * d, 3 * d), (d, d)).copy_from(&blk(&minv, 1, 1));
    Ok(u)
}

/// Random symplectic matrix as a product of `factors` generators, with
/// entries kept mild so downstream quadratures stay accurate.
pub fn random_symplectic<R: Rng>(d: usize, rng: &mut R, factors: usize) -> SymplecticMatrix {
    let mut s = SymplecticMatrix::identity(d);
    for _ in 0..factors {
        let pick: u8 = rng.gen_range(0..3);
        let f = match pick {
            0 => standard_j(d),
            1 => {
                let mut c = DMatrix::zeros(d, d);
                for i in 0..d {
                    for j in 0..=i {
                        let v = rng.gen_range(-0.6..0.6);
                        c[(i, j)] = v;
                        c[(j, i)] = v;
                    }
                }
                make_vc(&c).expect("symmetric by construction")
            }
            _ => {
                let mut e = DMatrix::identity(d, d);
                for i in 0..d {
                    e[(i, i)] = rng.gen_range(0.7..1.4);
                    for j in 0..d {
                        if i != j {
                            e[(i, j)] += rng.gen_range(-0.2..0.2);
                        }
                    }
                }
                match make_de(&e) {
                    Ok(m) => m,
                    Err(_) => standard_j(d),
                }
            }
        };
        s = s.compose(&f).expect("same dimension");
    }
    s
}
