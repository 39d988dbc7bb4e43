//! The affine multiview variety of `n` generic cameras and its ED degree.
//!
//! A point `y` of one affine chart of P^3 is sent to its `n` images, each
//! dehomogenized in a generic chart of P^2 obtained by a random 3x3 twist of
//! the camera. The ED degree is counted on that parametrization.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::critical::{ed_trial, CountProtocol, EdCertificate, ParametricVariety, VarietyPresentation};
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField, Rational, RationalField};
use crate::groebner::QuotientDimension;
use crate::linalg::{proportional, Matrix};
use crate::monomial::MonomialOrder;
use crate::poly::{Polynomial, Ring};

const ENTRY_BOUND: i64 = 100;
const MAX_ATTEMPTS: usize = 100;

/// Cameras, chart twists and the seed they were drawn from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CameraRig {
    pub n: usize,
    pub cameras: Vec<Vec<Vec<Rational>>>,
    pub chart_twists: Vec<Vec<Vec<Rational>>>,
    pub seed: u64,
}

fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix<RationalField> {
    let data = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| Rational::from(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND)))
                .collect()
        })
        .collect();
    Matrix::from_rows(&RationalField, data)
}

impl CameraRig {
    pub fn camera(&self, i: usize) -> Matrix<RationalField> {
        Matrix::from_rows(&RationalField, self.cameras[i].clone())
    }

    pub fn twist(&self, i: usize) -> Matrix<RationalField> {
        Matrix::from_rows(&RationalField, self.chart_twists[i].clone())
    }

    /// Camera centers, one kernel vector per camera.
    pub fn centers(&self) -> Vec<Vec<Rational>> {
        (0..self.n)
            .map(|i| self.camera(i).kernel().into_iter().next().unwrap_or_default())
            .collect()
    }

    /// Full rank cameras with pairwise distinct centers, invertible twists
    /// and pairwise non-proportional chart denominators.
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.cameras.len() != self.n || self.chart_twists.len() != self.n {
            return Err(Error::InvalidArgument("rig needs at least two cameras and one twist each".into()));
        }
        let shaped = |m: &Vec<Vec<Rational>>, r: usize, c: usize| m.len() == r && m.iter().all(|row| row.len() == c);
        if !self.cameras.iter().all(|m| shaped(m, 3, 4)) || !self.chart_twists.iter().all(|m| shaped(m, 3, 3)) {
            return Err(Error::InvalidArgument("cameras must be 3x4 and twists 3x3".into()));
        }
        for i in 0..self.n {
            if self.camera(i).rank() != 3 {
                return Err(Error::InvalidArgument(format!("camera {i} is not of full rank")));
            }
            if self.twist(i).rank() != 3 {
                return Err(Error::InvalidArgument(format!("twist {i} is singular")));
            }
        }
        let centers = self.centers();
        let rows: Vec<Vec<Rational>> = (0..self.n).map(|i| self.twist(i).mul(&self.camera(i)).row(2).to_vec()).collect();
        for i in 0..self.n {
            if rows[i][..3].iter().all(FieldElement::is_zero) {
                return Err(Error::DegenerateChart(i));
            }
            for j in 0..i {
                if proportional(&centers[i], &centers[j]) {
                    return Err(Error::InvalidArgument(format!("cameras {j} and {i} share a center")));
                }
                if proportional(&rows[i], &rows[j]) {
                    return Err(Error::InvalidArgument(format!(
                        "cameras {j} and {i} have proportional chart denominators"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Same cameras, fresh twists.
    pub fn redraw_twists(&self, seed: u64) -> Result<CameraRig> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..MAX_ATTEMPTS {
            let rig = CameraRig {
                chart_twists: (0..self.n).map(|_| random_matrix(&mut rng, 3, 3).to_rows()).collect(),
                seed,
                ..self.clone()
            };
            if rig.validate().is_ok() {
                return Ok(rig);
            }
        }
        Err(Error::Internal("could not draw generic chart twists".into()))
    }

    /// The same rig seen through another chart of P^3: every camera is
    /// composed with a random invertible 4x4 world twist.
    pub fn second_chart(&self, seed: u64) -> Result<CameraRig> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..MAX_ATTEMPTS {
            let w = random_matrix(&mut rng, 4, 4);
            if w.rank() != 4 {
                continue;
            }
            let rig = CameraRig {
                cameras: (0..self.n).map(|i| self.camera(i).mul(&w).to_rows()).collect(),
                ..self.clone()
            };
            if rig.validate().is_ok() {
                return Ok(rig);
            }
        }
        Err(Error::Internal("could not draw a generic world twist".into()))
    }
}

/// Draw `n` cameras with integer entries in `[-100, 100]` plus chart twists,
/// resampling until the rig is generic.
pub fn random_camera_rig(n: usize, seed: u64) -> Result<CameraRig> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 cameras, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let rig = CameraRig {
            n,
            cameras: (0..n).map(|_| random_matrix(&mut rng, 3, 4).to_rows()).collect(),
            chart_twists: (0..n).map(|_| random_matrix(&mut rng, 3, 3).to_rows()).collect(),
            seed,
        };
        if rig.validate().is_ok() {
            return Ok(rig);
        }
    }
    Err(Error::Internal(format!("no generic rig after {MAX_ATTEMPTS} attempts")))
}

/// `y -> (T_i A_i (y,1))` dehomogenized by the third coordinate, in the
/// domain variables `y1, y2, y3`.
#[derive(Clone, Debug)]
pub struct MultiviewMap {
    variety: ParametricVariety<RationalField>,
}

impl MultiviewMap {
    pub fn variety(&self) -> &ParametricVariety<RationalField> {
        &self.variety
    }

    pub fn into_presentation(self) -> VarietyPresentation<RationalField> {
        VarietyPresentation::Parametric(self.variety)
    }
}

pub fn multiview_map(rig: &CameraRig) -> Result<MultiviewMap> {
    let ring = Ring::new(&["y1", "y2", "y3"], RationalField, MonomialOrder::DegRevLex);
    let affine = |row: &[Rational]| {
        let mut p = Polynomial::constant(&ring, row[3].clone());
        for (j, c) in row[..3].iter().enumerate() {
            p = p.add_scaled(&Polynomial::var_at(&ring, j), c);
        }
        p
    };
    let mut comps = Vec::with_capacity(2 * rig.n);
    for i in 0..rig.n {
        let m = rig.twist(i).mul(&rig.camera(i));
        let den = affine(m.row(2));
        if den.is_zero() {
            return Err(Error::DegenerateChart(i));
        }
        comps.push((affine(m.row(0)), den.clone()));
        comps.push((affine(m.row(1)), den));
    }
    Ok(MultiviewMap {
        variety: ParametricVariety::new(&ring, comps)?,
    })
}

/// Options for [`ed_degree_multiview`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MultiviewOptions {
    /// Recount every trial in a second random chart of P^3.
    pub verify_second_chart: bool,
}

fn multiview_trial(n: usize, prime: Option<u32>, seed: u64, protocol: &CountProtocol, second: bool) -> Result<QuotientDimension> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rig_seed: u64 = rng.gen();
    let alpha_seed: u64 = rng.gen();
    let world_seed: u64 = rng.gen();
    let mut rig = random_camera_rig(n, rig_seed)?;
    if second {
        rig = rig.second_chart(world_seed)?;
    }
    let v = multiview_map(&rig)?.into_presentation();
    match prime {
        Some(p) => {
            let field = PrimeField::new(p as u64)?;
            ed_trial(&v.to_field(&field)?, &field, alpha_seed, &protocol.groebner)
        }
        None => ed_trial(&v, &RationalField, alpha_seed, &protocol.groebner),
    }
}

/// ED degree of the affine multiview variety; every trial draws a fresh rig
/// and a fresh data point.
pub fn ed_degree_multiview(n: usize, protocol: &CountProtocol, options: MultiviewOptions) -> Result<EdCertificate> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 cameras, got {n}")));
    }
    let first = protocol.run(|_, prime, seed| multiview_trial(n, prime, seed, protocol, false))?;
    if !options.verify_second_chart {
        return Ok(first);
    }
    let second = protocol.run(|_, prime, seed| multiview_trial(n, prime, seed, protocol, true));
    let mut trials = first.trials;
    match second {
        Ok(cert) => trials.extend(cert.trials),
        Err(Error::NonGeneric { trials: more }) | Err(Error::InfiniteCriticalLocus { trials: more }) => {
            trials.extend(more)
        }
        Err(e) => return Err(e),
    }
    EdCertificate::from_trials(trials)
}

/// `9/2 n^3 - 21/2 n^2 + 8n - 4`.
pub fn conjecture_value(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let n = BigInt::from(n);
    let v = Rational::new(9 * n.pow(3), 2) - Rational::new(21 * n.pow(2), 2) + Rational::from_integer(8 * &n - 4);
    if !v.is_integer() {
        return Err(Error::NotInteger(v.to_string()));
    }
    v.to_i64()
        .and_then(|x| u64::try_from(x).ok())
        .ok_or_else(|| Error::InvalidArgument(format!("value {v} out of range")))
}

/// `6n^3 - 15n^2 + 11n - 4`.
pub fn hl_bound(n: u64) -> u64 {
    6 * n.pow(3) + 11 * n - 15 * n.pow(2) - 4
}
