//! Critical ideals of distance and linear functions on affine varieties, and
//! the multi-trial counting protocol that turns them into ED degrees.
//!
//! For an implicit variety `X = V(f_1..f_k)` of codimension `c` the critical
//! points of a function with gradient row `w` are cut out by the `f_i`
//! together with the `(c+1)`-minors of the matrix `[w; Jac(f)]`. Taking `w`
//! to be a dual vector `u` gives the conormal variety, `w = z - alpha` gives
//! the critical points of the squared distance to `alpha`, and a constant `w`
//! gives the critical points of a linear function. Points on the singular
//! locus are removed by requiring a random combination of the `c x c`
//! Jacobian minors to be nonzero.
//!
//! For a parametrized variety the gradient of `sum_i (phi_i(t) - alpha_i)^2`
//! is cleared of denominators and the poles are removed the same way.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, TrialRecord};
use crate::field::{Field, FieldElement, PrimeField, Rational, RationalField, DEFAULT_PRIME};
use crate::groebner::{
    count_with_inequation, groebner_basis, ideal_dimension, GroebnerConfig, IdealPresentation, QuotientDimension,
};
use crate::linalg::{poly_minors, Matrix};
use crate::monomial::MonomialOrder;
use crate::parse::{parse_poly, strip_comment};
use crate::poly::{Polynomial, Ring};

/// Second default modulus, so that the default protocol spans two primes.
pub const SECOND_PRIME: u32 = 2_147_483_587;

/// `X = V(I)` inside affine space whose coordinates are the ring variables.
#[derive(Clone, Debug)]
pub struct ImplicitVariety<F: Field> {
    ideal: IdealPresentation<F>,
    codim: usize,
}

impl<F: Field> ImplicitVariety<F> {
    pub fn new(ideal: IdealPresentation<F>, codim: usize) -> Result<Self> {
        let ambient = ideal.ring().nvars();
        if codim < 1 || codim > ambient {
            return Err(Error::CodimensionOutOfRange { codim, ambient });
        }
        Ok(ImplicitVariety { ideal, codim })
    }

    pub fn ideal(&self) -> &IdealPresentation<F> {
        &self.ideal
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        self.ideal.ring()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ideal.ring().nvars()
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        self.ideal.generators()
    }

    /// Jacobian matrix, one row per generator.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial<F>>> {
        self.generators()
            .iter()
            .map(|f| (0..self.ambient_dim()).map(|j| f.diff_at(j)).collect())
            .collect()
    }

    /// Compare the stated codimension with the Krull dimension of the ideal.
    pub fn check_codim(&self, config: &GroebnerConfig) -> Result<bool> {
        let basis = groebner_basis(&self.ideal, MonomialOrder::DegRevLex, config)?;
        Ok(ideal_dimension(&basis)? + self.codim == self.ambient_dim())
    }
}

/// `X` = closure of the image of `t -> (p_1(t)/q_1(t), ..., p_n(t)/q_n(t))`.
#[derive(Clone, Debug)]
pub struct ParametricVariety<F: Field> {
    domain: Arc<Ring<F>>,
    components: Vec<(Polynomial<F>, Polynomial<F>)>,
}

impl<F: Field> ParametricVariety<F> {
    /// Denominators are made monic; a zero denominator is rejected.
    pub fn new(domain: &Arc<Ring<F>>, components: Vec<(Polynomial<F>, Polynomial<F>)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidPresentation("no components".into()));
        }
        let mut out = Vec::with_capacity(components.len());
        for (i, (num, den)) in components.into_iter().enumerate() {
            num.check_ring(domain)?;
            den.check_ring(domain)?;
            let Some(lc) = den.leading_coeff() else {
                return Err(Error::ZeroDenominator(i));
            };
            let inv = lc.inv().expect("nonzero");
            out.push((num.scale(&inv), den.scale(&inv)));
        }
        Ok(ParametricVariety {
            domain: domain.clone(),
            components: out,
        })
    }

    pub fn domain(&self) -> &Arc<Ring<F>> {
        &self.domain
    }

    pub fn components(&self) -> &[(Polynomial<F>, Polynomial<F>)] {
        &self.components
    }

    pub fn ambient_dim(&self) -> usize {
        self.components.len()
    }

    /// Distinct denominators, and for each component the index of its own.
    pub fn denominator_groups(&self) -> (Vec<Polynomial<F>>, Vec<usize>) {
        let mut distinct: Vec<Polynomial<F>> = Vec::new();
        let mut index = Vec::with_capacity(self.components.len());
        for (_, den) in &self.components {
            match distinct.iter().position(|d| d == den) {
                Some(k) => index.push(k),
                None => {
                    index.push(distinct.len());
                    distinct.push(den.clone());
                }
            }
        }
        (distinct, index)
    }
}

#[derive(Clone, Debug)]
pub enum VarietyPresentation<F: Field> {
    Implicit(ImplicitVariety<F>),
    Parametric(ParametricVariety<F>),
}

impl<F: Field> VarietyPresentation<F> {
    pub fn ambient_dim(&self) -> usize {
        match self {
            VarietyPresentation::Implicit(v) => v.ambient_dim(),
            VarietyPresentation::Parametric(v) => v.ambient_dim(),
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            VarietyPresentation::Implicit(_) => "implicit",
            VarietyPresentation::Parametric(_) => "parametric",
        }
    }
}

impl ImplicitVariety<RationalField> {
    pub fn to_field<G: Field>(&self, field: &G) -> Result<ImplicitVariety<G>> {
        let ring = self.ring().with_field(field.clone());
        let gens = self
            .generators()
            .iter()
            .map(|g| g.to_field(&ring))
            .collect::<Result<Vec<_>>>()?;
        ImplicitVariety::new(IdealPresentation::new(&ring, gens)?, self.codim)
    }
}

impl ParametricVariety<RationalField> {
    pub fn to_field<G: Field>(&self, field: &G) -> Result<ParametricVariety<G>> {
        let ring = self.domain.with_field(field.clone());
        let comps = self
            .components
            .iter()
            .map(|(n, d)| Ok((n.to_field(&ring)?, d.to_field(&ring)?)))
            .collect::<Result<Vec<_>>>()?;
        ParametricVariety::new(&ring, comps)
    }
}

impl VarietyPresentation<RationalField> {
    pub fn to_field<G: Field>(&self, field: &G) -> Result<VarietyPresentation<G>> {
        Ok(match self {
            VarietyPresentation::Implicit(v) => VarietyPresentation::Implicit(v.to_field(field)?),
            VarietyPresentation::Parametric(v) => VarietyPresentation::Parametric(v.to_field(field)?),
        })
    }
}

/// One fixed data point for one variety over one field.
#[derive(Clone, Debug)]
pub struct EdInstance<F: Field> {
    pub variety: VarietyPresentation<F>,
    pub alpha: Vec<F::Elem>,
    pub prime: Option<u32>,
    pub seed: u64,
}

impl<F: Field> EdInstance<F> {
    pub fn new(variety: VarietyPresentation<F>, alpha: Vec<F::Elem>, prime: Option<u32>, seed: u64) -> Result<Self> {
        if alpha.len() != variety.ambient_dim() {
            return Err(Error::InvalidArgument(format!(
                "data point has {} coordinates, expected {}",
                alpha.len(),
                variety.ambient_dim()
            )));
        }
        Ok(EdInstance {
            variety,
            alpha,
            prime,
            seed,
        })
    }

    /// Number of critical points of the distance from `alpha` on the smooth
    /// locus (or off the poles of a parametrization). The seed drives the
    /// smooth-locus inequation.
    pub fn critical_count(&self, config: &GroebnerConfig) -> Result<QuotientDimension> {
        let (ideal, ineq) = match &self.variety {
            VarietyPresentation::Implicit(iv) => ed_critical_ideal(iv, &self.alpha, &mut seeded_rng(self.seed))?,
            VarietyPresentation::Parametric(pv) => match parametric_critical_system(pv, &self.alpha) {
                Ok(sys) => sys,
                Err(Error::EmptyIdeal) => return Ok(QuotientDimension::Infinite),
                Err(e) => return Err(e),
            },
        };
        count_with_inequation(&ideal, &ineq, config)
    }
}

/// Linear function `l(z) = sum a_i z_i`; the level `constant` names the
/// hyperplane `l = c`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFunctional<F: Field> {
    pub coefficients: Vec<F::Elem>,
    pub constant: F::Elem,
}

impl<F: Field> LinearFunctional<F> {
    pub fn new(coefficients: Vec<F::Elem>, constant: F::Elem) -> Result<Self> {
        if coefficients.iter().all(FieldElement::is_zero) {
            return Err(Error::InvalidArgument("linear functional is identically zero".into()));
        }
        Ok(LinearFunctional { coefficients, constant })
    }

    pub fn random<R: Rng + ?Sized>(field: &F, n: usize, rng: &mut R) -> Self {
        loop {
            let coefficients: Vec<_> = (0..n).map(|_| field.sample(rng)).collect();
            if coefficients.iter().any(|c| !c.is_zero()) {
                return LinearFunctional {
                    coefficients,
                    constant: field.sample(rng),
                };
            }
        }
    }
}

/// Which linear function a linear count uses.
#[derive(Clone, Debug)]
pub enum LinearChoice {
    /// Fresh generic functional per trial.
    Random,
    /// Fixed rational coefficients.
    Fixed(Vec<Rational>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountField {
    /// Prime fields, cycling through [`CountProtocol::primes`].
    Prime,
    /// Exact rational arithmetic.
    Rational,
}

/// How many independent generic trials to run and where.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountProtocol {
    pub trials: usize,
    pub primes: Vec<u32>,
    pub seed: u64,
    pub field: CountField,
    pub groebner: GroebnerConfig,
    pub parallel: bool,
}

impl Default for CountProtocol {
    fn default() -> Self {
        CountProtocol {
            trials: 3,
            primes: vec![DEFAULT_PRIME, SECOND_PRIME],
            seed: 1,
            field: CountField::Prime,
            groebner: GroebnerConfig::default(),
            parallel: true,
        }
    }
}

impl CountProtocol {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 3 {
            return Err(Error::InvalidArgument(format!(
                "at least 3 trials are required, got {}",
                self.trials
            )));
        }
        if self.field == CountField::Prime {
            if self.primes.is_empty() {
                return Err(Error::InvalidArgument("no primes given".into()));
            }
            for &p in &self.primes {
                PrimeField::new(p as u64)?;
            }
        }
        Ok(())
    }

    pub fn trial_seed(&self, k: usize) -> u64 {
        self.seed.wrapping_add(k as u64)
    }

    pub fn trial_prime(&self, k: usize) -> Option<u32> {
        match self.field {
            CountField::Prime => Some(self.primes[k % self.primes.len()]),
            CountField::Rational => None,
        }
    }

    /// Run `trial(k, prime, seed)` for every trial and assemble a certificate.
    pub fn run<T>(&self, trial: T) -> Result<EdCertificate>
    where
        T: Fn(usize, Option<u32>, u64) -> Result<QuotientDimension> + Sync,
    {
        self.validate()?;
        let job = |k: usize| -> Result<TrialRecord> {
            let prime = self.trial_prime(k);
            let seed = self.trial_seed(k);
            Ok(TrialRecord {
                prime,
                seed,
                count: trial(k, prime, seed)?,
            })
        };
        let records: Vec<TrialRecord> = if self.parallel {
            (0..self.trials).into_par_iter().map(job).collect::<Result<_>>()?
        } else {
            (0..self.trials).map(job).collect::<Result<_>>()?
        };
        EdCertificate::from_trials(records)
    }
}

/// Agreed count over several generic trials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdCertificate {
    pub count: Option<u64>,
    pub trials: Vec<TrialRecord>,
    pub agreed: bool,
}

impl EdCertificate {
    /// Disagreement is an error carrying every raw count; there is no vote.
    pub fn from_trials(trials: Vec<TrialRecord>) -> Result<Self> {
        let first = trials
            .first()
            .ok_or_else(|| Error::Internal("no trials".into()))?
            .count;
        if trials.iter().any(|t| t.count != first) {
            return Err(Error::NonGeneric { trials });
        }
        match first {
            QuotientDimension::Finite(n) => Ok(EdCertificate {
                count: Some(n),
                trials,
                agreed: true,
            }),
            QuotientDimension::Infinite => Err(Error::InfiniteCriticalLocus { trials }),
        }
    }
}

pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generators of `X` plus the `(c+1)`-minors of `[first_row; Jac]`, where the
/// Jacobian is embedded into `target` via `positions`.
fn bordered_minors<F: Field>(
    v: &ImplicitVariety<F>,
    target: &Arc<Ring<F>>,
    positions: &[usize],
    first_row: Vec<Polynomial<F>>,
) -> Vec<Polynomial<F>> {
    let mut matrix = vec![first_row];
    for row in v.jacobian() {
        matrix.push(row.iter().map(|p| p.embed(target, positions)).collect());
    }
    let mut gens: Vec<Polynomial<F>> = v.generators().iter().map(|f| f.embed(target, positions)).collect();
    gens.extend(poly_minors(&matrix, v.codim + 1).into_iter().filter(|m| !m.is_zero()));
    gens
}

/// Conormal ideal in the coordinates `z_1..z_n, u_1..u_n`; the dual
/// coordinates are named `u_<var>`.
pub fn conormal_ideal<F: Field>(v: &ImplicitVariety<F>) -> Result<IdealPresentation<F>> {
    let n = v.ambient_dim();
    let names: Vec<String> = v.ring().vars().iter().map(|x| format!("u_{x}")).collect();
    let target = v.ring().extended(&names);
    let positions: Vec<usize> = (0..n).collect();
    let first_row = (0..n).map(|i| Polynomial::var_at(&target, n + i)).collect();
    IdealPresentation::new(&target, bordered_minors(v, &target, &positions, first_row))
}

/// Random combination of the `c x c` Jacobian minors; nonzero exactly off
/// the rank-deficient locus for a generic choice.
pub fn smooth_locus_inequation<F: Field, R: Rng + ?Sized>(v: &ImplicitVariety<F>, rng: &mut R) -> Polynomial<F> {
    let field = v.ring().field();
    let minors = poly_minors(&v.jacobian(), v.codim);
    let mut acc = Polynomial::zero(v.ring());
    for m in minors {
        acc = acc.add_scaled(&m, &field.sample(rng));
    }
    acc
}

/// Critical ideal of the squared distance to `alpha`, with the smooth-locus
/// inequation.
pub fn ed_critical_ideal<F: Field, R: Rng + ?Sized>(
    v: &ImplicitVariety<F>,
    alpha: &[F::Elem],
    rng: &mut R,
) -> Result<(IdealPresentation<F>, Polynomial<F>)> {
    let n = v.ambient_dim();
    if alpha.len() != n {
        return Err(Error::InvalidArgument(format!("data point has {} coordinates, expected {n}", alpha.len())));
    }
    let ring = v.ring();
    let first_row = (0..n)
        .map(|i| &Polynomial::var_at(ring, i) - &Polynomial::constant(ring, alpha[i].clone()))
        .collect();
    let positions: Vec<usize> = (0..n).collect();
    let gens = bordered_minors(v, ring, &positions, first_row);
    Ok((IdealPresentation::new(ring, gens)?, smooth_locus_inequation(v, rng)))
}

/// Critical ideal of a linear function, with the smooth-locus inequation.
pub fn linear_critical_ideal<F: Field, R: Rng + ?Sized>(
    v: &ImplicitVariety<F>,
    l: &LinearFunctional<F>,
    rng: &mut R,
) -> Result<(IdealPresentation<F>, Polynomial<F>)> {
    let n = v.ambient_dim();
    if l.coefficients.len() != n {
        return Err(Error::InvalidArgument(format!(
            "linear functional has {} coefficients, expected {n}",
            l.coefficients.len()
        )));
    }
    let ring = v.ring();
    let first_row = l.coefficients.iter().map(|c| Polynomial::constant(ring, c.clone())).collect();
    let positions: Vec<usize> = (0..n).collect();
    let gens = bordered_minors(v, ring, &positions, first_row);
    Ok((IdealPresentation::new(ring, gens)?, smooth_locus_inequation(v, rng)))
}

/// Cleared gradient equations of `sum_i (phi_i - alpha_i)^2` in the domain
/// variables, and the product of the distinct denominators.
pub fn parametric_critical_system<F: Field>(
    v: &ParametricVariety<F>,
    alpha: &[F::Elem],
) -> Result<(IdealPresentation<F>, Polynomial<F>)> {
    if alpha.len() != v.ambient_dim() {
        return Err(Error::InvalidArgument(format!(
            "data point has {} coordinates, expected {}",
            alpha.len(),
            v.ambient_dim()
        )));
    }
    let ring = v.domain();
    let (dens, group) = v.denominator_groups();
    let cubes: Vec<Polynomial<F>> = dens.iter().map(|d| d.pow(3)).collect();
    // product of all cubes except group g
    let others: Vec<Polynomial<F>> = (0..dens.len())
        .map(|g| {
            cubes
                .iter()
                .enumerate()
                .filter(|(h, _)| *h != g)
                .fold(Polynomial::one(ring), |acc, (_, c)| &acc * c)
        })
        .collect();
    let mut equations = Vec::with_capacity(ring.nvars());
    for j in 0..ring.nvars() {
        let mut eq = Polynomial::zero(ring);
        for (i, (p, q)) in v.components().iter().enumerate() {
            let residual = p - &q.scale(&alpha[i]);
            let dphi = &(&p.diff_at(j) * q) - &(p * &q.diff_at(j));
            eq = &eq + &(&(&residual * &dphi) * &others[group[i]]);
        }
        equations.push(eq);
    }
    let inequation = dens.iter().fold(Polynomial::one(ring), |acc, d| &acc * d);
    // EmptyIdeal here means every point of the domain is critical
    Ok((IdealPresentation::new(ring, equations)?, inequation))
}

/// Count critical points of the squared distance from a freshly drawn
/// generic point.
pub fn ed_trial<F: Field>(
    v: &VarietyPresentation<F>,
    field: &F,
    seed: u64,
    config: &GroebnerConfig,
) -> Result<QuotientDimension> {
    let mut rng = seeded_rng(seed);
    let alpha: Vec<F::Elem> = (0..v.ambient_dim()).map(|_| field.sample(&mut rng)).collect();
    let inner_seed = rng.gen();
    EdInstance::new(v.clone(), alpha, field.modulus(), inner_seed)?.critical_count(config)
}

/// ED degree with the agreement protocol. The presentation is over the
/// rationals and is reduced modulo each trial's prime.
pub fn ed_degree(v: &VarietyPresentation<RationalField>, protocol: &CountProtocol) -> Result<EdCertificate> {
    protocol.run(|_, prime, seed| match prime {
        Some(p) => {
            let field = PrimeField::new(p as u64)?;
            ed_trial(&v.to_field(&field)?, &field, seed, &protocol.groebner)
        }
        None => ed_trial(v, &RationalField, seed, &protocol.groebner),
    })
}

fn linear_trial<F: Field, R: Rng + ?Sized>(
    v: &ImplicitVariety<F>,
    field: &F,
    choice: &LinearChoice,
    rng: &mut R,
    config: &GroebnerConfig,
) -> Result<QuotientDimension> {
    let l = match choice {
        LinearChoice::Random => LinearFunctional::random(field, v.ambient_dim(), rng),
        LinearChoice::Fixed(coeffs) => LinearFunctional::new(
            coeffs.iter().map(|c| field.from_rational(c)).collect::<Result<_>>()?,
            field.zero(),
        )?,
    };
    let (ideal, ineq) = linear_critical_ideal(v, &l, rng)?;
    count_with_inequation(&ideal, &ineq, config)
}

/// Number of critical points of a linear function on the smooth locus.
pub fn linear_critical_count(
    v: &ImplicitVariety<RationalField>,
    choice: &LinearChoice,
    protocol: &CountProtocol,
) -> Result<EdCertificate> {
    protocol.run(|_, prime, seed| {
        let mut rng = seeded_rng(seed);
        match prime {
            Some(p) => {
                let field = PrimeField::new(p as u64)?;
                linear_trial(&v.to_field(&field)?, &field, choice, &mut rng, &protocol.groebner)
            }
            None => linear_trial(v, &RationalField, choice, &mut rng, &protocol.groebner),
        }
    })
}

/// Compose the generators with `z -> Q^T (z - v)`, i.e. move the variety by
/// the isometry `z -> Q z + v`.
pub fn apply_isometry(
    v: &ImplicitVariety<RationalField>,
    q: &Matrix<RationalField>,
    shift: &[Rational],
) -> Result<ImplicitVariety<RationalField>> {
    let n = v.ambient_dim();
    if q.rows() != n || q.cols() != n || shift.len() != n {
        return Err(Error::InvalidArgument("isometry has the wrong size".into()));
    }
    let ring = v.ring();
    let shifted: Vec<Polynomial<RationalField>> = (0..n)
        .map(|i| &Polynomial::var_at(ring, i) - &Polynomial::constant(ring, shift[i].clone()))
        .collect();
    let images: Vec<Polynomial<RationalField>> = (0..n)
        .map(|i| {
            // (Q^T (z - v))_i = sum_j Q_ji (z_j - v_j)
            (0..n).fold(Polynomial::zero(ring), |acc, j| acc.add_scaled(&shifted[j], q.get(j, i)))
        })
        .collect();
    let gens = v
        .generators()
        .iter()
        .map(|f| f.substitute_images(ring, &images))
        .collect();
    ImplicitVariety::new(IdealPresentation::new(ring, gens)?, v.codim())
}

/// Rational orthogonal matrix `(I - S)(I + S)^{-1}` from a skew-symmetric `S`.
pub fn cayley_transform(skew: &Matrix<RationalField>) -> Result<Matrix<RationalField>> {
    let n = skew.rows();
    let id = Matrix::identity(&RationalField, n);
    let minus = id.add(&skew.scale(&Rational::from(-1)));
    let plus = id.add(skew);
    let inv = plus
        .inverse()
        .ok_or_else(|| Error::InvalidArgument("I + S is singular".into()))?;
    Ok(minus.mul(&inv))
}

/// Random rational orthogonal matrix via the Cayley transform of a skew
/// matrix with small integer entries.
pub fn random_rational_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix<RationalField> {
    let mut s = Matrix::zeros(&RationalField, n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v: i64 = rng.gen_range(-5..=5);
            s.set(i, j, Rational::from(v));
            s.set(j, i, Rational::from(-v));
        }
    }
    // I + S is invertible for real skew S
    cayley_transform(&s).expect("I + S invertible")
}

// ---------------------------------------------------------------------------
// Variety files

/// Parse a variety file.
///
/// Implicit mode: a polynomial file with headers `# vars: x,y,...` and
/// `# codim: c` (codim defaults to 1 for a single generator). Parametric
/// mode: header `# params: t1,...` and one `numerator | denominator` line per
/// component (a missing denominator means 1).
pub fn parse_variety(text: &str) -> Result<VarietyPresentation<RationalField>> {
    let mut headers: HashMap<String, String> = HashMap::new();
    let mut body: Vec<(usize, String)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix('#') {
            if let Some((key, value)) = rest.split_once(':') {
                let key = key.trim().to_ascii_lowercase();
                if matches!(key.as_str(), "vars" | "codim" | "params") {
                    headers.insert(key, value.trim().to_string());
                }
            }
            continue;
        }
        let content = strip_comment(line).trim();
        if !content.is_empty() {
            body.push((lineno + 1, content.to_string()));
        }
    }
    let split_names = |s: &str| -> Vec<String> {
        s.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect()
    };
    let with_line = |lineno: usize, e: Error| match e {
        Error::Syntax { pos, message } => Error::Syntax {
            pos,
            message: format!("line {lineno}: {message}"),
        },
        other => other,
    };

    if let Some(params) = headers.get("params") {
        let ring = Ring::new(&split_names(params), RationalField, MonomialOrder::DegRevLex);
        let mut comps = Vec::new();
        for (lineno, line) in &body {
            let (num, den) = match line.split_once('|') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (line.as_str(), "1"),
            };
            let num = parse_poly(num, &ring).map_err(|e| with_line(*lineno, e))?;
            let den = parse_poly(den, &ring).map_err(|e| with_line(*lineno, e))?;
            comps.push((num, den));
        }
        return Ok(VarietyPresentation::Parametric(ParametricVariety::new(&ring, comps)?));
    }

    let vars = headers
        .get("vars")
        .ok_or_else(|| Error::InvalidPresentation("missing `# vars:` header".into()))?;
    let ring = Ring::new(&split_names(vars), RationalField, MonomialOrder::DegRevLex);
    let gens = body
        .iter()
        .map(|(lineno, line)| parse_poly(line, &ring).map_err(|e| with_line(*lineno, e)))
        .collect::<Result<Vec<_>>>()?;
    let codim = match headers.get("codim") {
        Some(c) => c
            .parse::<usize>()
            .map_err(|_| Error::InvalidPresentation(format!("bad codim `{c}`")))?,
        None if gens.len() == 1 => 1,
        None => return Err(Error::InvalidPresentation("missing `# codim:` header".into())),
    };
    Ok(VarietyPresentation::Implicit(ImplicitVariety::new(
        IdealPresentation::new(&ring, gens)?,
        codim,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn implicit(vars: &[&str], gens: &[&str], codim: usize) -> ImplicitVariety<RationalField> {
        let ring = Ring::new(vars, RationalField, MonomialOrder::DegRevLex);
        let gens = gens.iter().map(|g| parse_poly(g, &ring).unwrap()).collect();
        ImplicitVariety::new(IdealPresentation::new(&ring, gens).unwrap(), codim).unwrap()
    }

    fn gens_as_strings(i: &IdealPresentation<RationalField>) -> Vec<String> {
        i.generators().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn conormal_parabola() {
        let v = implicit(&["x", "y"], &["y - x^2"], 1);
        let c = conormal_ideal(&v).unwrap();
        assert_eq!(c.ring().vars(), &["x", "y", "u_x", "u_y"]);
        assert_eq!(gens_as_strings(&c), vec!["-x^2 + y", "2*x*u_y + u_x"]);
    }

    #[test]
    fn conormal_cubic_curve() {
        let v = implicit(&["x", "y"], &["x*(x+1)*y - 1"], 1);
        let c = conormal_ideal(&v).unwrap();
        let r = c.ring();
        let expected = parse_poly("(2*x+1)*y*u_y - x*(x+1)*u_x", r).unwrap();
        let minor = &c.generators()[1];
        assert!(minor == &expected || minor == &(-&expected));
    }

    #[test]
    fn conormal_hyperplane() {
        let v = implicit(&["z1", "z2"], &["z1"], 1);
        let c = conormal_ideal(&v).unwrap();
        let r = c.ring();
        assert_eq!(c.generators()[0], parse_poly("z1", r).unwrap());
        let u2 = parse_poly("u_z2", r).unwrap();
        assert!(c.generators()[1] == u2 || c.generators()[1] == -&u2);
    }

    #[test]
    fn codimension_checks() {
        let ring = Ring::new(&["x", "y"], RationalField, MonomialOrder::DegRevLex);
        let ideal = IdealPresentation::new(&ring, vec![parse_poly("x", &ring).unwrap()]).unwrap();
        assert!(matches!(
            ImplicitVariety::new(ideal.clone(), 0),
            Err(Error::CodimensionOutOfRange { codim: 0, ambient: 2 })
        ));
        assert!(ImplicitVariety::new(ideal.clone(), 3).is_err());
        let v = ImplicitVariety::new(ideal, 1).unwrap();
        assert!(v.check_codim(&GroebnerConfig::default()).unwrap());
    }

    #[test]
    fn circle_distance_minor() {
        let v = implicit(&["z1", "z2"], &["z1^2 + z2^2 - 1"], 1);
        let alpha = [Rational::from(3), Rational::from(5)];
        let (ideal, _) = ed_critical_ideal(&v, &alpha, &mut seeded_rng(0)).unwrap();
        let r = ideal.ring();
        assert_eq!(ideal.generators()[0], parse_poly("z1^2 + z2^2 - 1", r).unwrap());
        assert_eq!(
            ideal.generators()[1],
            parse_poly("2*z2*(z1 - 3) - 2*z1*(z2 - 5)", r).unwrap()
        );
    }

    #[test]
    fn line_projection_is_unique() {
        let v = implicit(&["z1", "z2"], &["z2"], 1);
        let alpha = [Rational::from(7), Rational::from(-2)];
        let (ideal, ineq) = ed_critical_ideal(&v, &alpha, &mut seeded_rng(0)).unwrap();
        let cfg = GroebnerConfig::default();
        let b = groebner_basis(&ideal, MonomialOrder::Lex, &cfg).unwrap();
        let printed: Vec<String> = b.elements().iter().map(|g| g.to_string()).collect();
        assert_eq!(printed, vec!["z2", "z1 - 7"]);
        assert_eq!(count_with_inequation(&ideal, &ineq, &cfg).unwrap(), QuotientDimension::Finite(1));
    }

    #[test]
    fn parametric_parabola_is_the_cubic() {
        let ring = Ring::new(&["t"], RationalField, MonomialOrder::DegRevLex);
        let p = |s: &str| parse_poly(s, &ring).unwrap();
        let v = ParametricVariety::new(&ring, vec![(p("t"), p("1")), (p("t^2"), p("1"))]).unwrap();
        let (a, b) = (Rational::from(2), Rational::from(-3));
        let (ideal, ineq) = parametric_critical_system(&v, &[a, b]).unwrap();
        assert_eq!(ideal.generators(), &[p("(t - 2) + 2*t*(t^2 + 3)")]);
        assert!(ineq.is_constant());

        let line = ParametricVariety::new(&ring, vec![(p("t"), p("1")), (p("0"), p("1"))]).unwrap();
        let (ideal, _) = parametric_critical_system(&line, &[Rational::from(5), Rational::from(1)]).unwrap();
        assert_eq!(ideal.generators(), &[p("t - 5")]);
    }

    #[test]
    fn parametric_twisted_cubic_is_quintic() {
        let ring = Ring::new(&["t"], RationalField, MonomialOrder::DegRevLex);
        let p = |s: &str| parse_poly(s, &ring).unwrap();
        let v = ParametricVariety::new(&ring, vec![(p("t"), p("1")), (p("t^2"), p("1")), (p("t^3"), p("1"))]).unwrap();
        let alpha = [Rational::from(1), Rational::from(2), Rational::from(3)];
        let (ideal, _) = parametric_critical_system(&v, &alpha).unwrap();
        assert_eq!(
            ideal.generators(),
            &[p("(t - 1) + 2*t*(t^2 - 2) + 3*t^2*(t^3 - 3)")]
        );
    }

    #[test]
    fn zero_denominator_rejected() {
        let ring = Ring::new(&["t"], RationalField, MonomialOrder::DegRevLex);
        let p = |s: &str| parse_poly(s, &ring).unwrap();
        assert!(matches!(
            ParametricVariety::new(&ring, vec![(p("t"), p("1")), (p("t"), p("0"))]),
            Err(Error::ZeroDenominator(1))
        ));
    }

    #[test]
    fn rational_denominators_clear_to_cubes() {
        // phi(t) = (1/t, t): terms over t^3
        let ring = Ring::new(&["t"], RationalField, MonomialOrder::DegRevLex);
        let p = |s: &str| parse_poly(s, &ring).unwrap();
        let v = ParametricVariety::new(&ring, vec![(p("1"), p("t")), (p("t"), p("1"))]).unwrap();
        let (ideal, ineq) = parametric_critical_system(&v, &[Rational::from(0), Rational::from(0)]).unwrap();
        // d/dt [t^-2 + t^2] / 2 = -t^-3 + t, cleared by t^3: t^4 - 1
        assert_eq!(ideal.generators(), &[p("t^4 - 1")]);
        assert_eq!(ineq, p("t"));
    }

    #[test]
    fn certificate_disagreement_reports_all_counts() {
        let rec = |count| TrialRecord {
            prime: Some(7),
            seed: 1,
            count: QuotientDimension::Finite(count),
        };
        let ok = EdCertificate::from_trials(vec![rec(3), rec(3), rec(3)]).unwrap();
        assert_eq!(ok.count, Some(3));
        assert!(ok.agreed);
        match EdCertificate::from_trials(vec![rec(3), rec(2), rec(3)]) {
            Err(Error::NonGeneric { trials }) => assert_eq!(trials.len(), 3),
            other => panic!("expected NonGeneric, got {other:?}"),
        }
    }

    #[test]
    fn protocol_requires_three_trials() {
        let protocol = CountProtocol {
            trials: 2,
            ..CountProtocol::default()
        };
        assert!(protocol.validate().is_err());
        let bad_prime = CountProtocol {
            primes: vec![15],
            ..CountProtocol::default()
        };
        assert!(bad_prime.validate().is_err());
    }

    #[test]
    fn cayley_is_orthogonal() {
        let q = random_rational_orthogonal(3, &mut seeded_rng(4));
        assert_eq!(q.mul(&q.transpose()), Matrix::identity(&RationalField, 3));
    }

    #[test]
    fn variety_file_formats() {
        let v = parse_variety("# vars: x, y\n# codim: 1\ny - x^2\n").unwrap();
        assert!(matches!(v, VarietyPresentation::Implicit(ref iv) if iv.codim() == 1));
        let v = parse_variety("# params: t\nt | 1\nt^2\n").unwrap();
        match v {
            VarietyPresentation::Parametric(pv) => assert_eq!(pv.ambient_dim(), 2),
            _ => panic!("expected parametric"),
        }
        assert!(parse_variety("y - x^2\n").is_err());
        assert!(parse_variety("# vars: x,y\nx\ny\n").is_err());
        let err = parse_variety("# vars: x\n# codim: 1\nx +\n").unwrap_err();
        assert!(err.to_string().contains("line 3"));
    }
}
