//! Newton-polygon analysis of the [p]-series and explicit p-torsion roots
//! in tame extensions.
//!
//! For a strict dimension-1 group with form degree d = p^h, the nonzero
//! p-torsion valuations all equal 1/(d-1) and the field they generate is
//! the tame extension cut out by Z^(d-1) + p/u, u the unit coefficient of
//! T^d. The lift starts from theta = c*pi with c a Teichmuller unit:
//! p z + u z^d vanishes exactly there, so the Newton descent criterion
//! v([p](z0)) > v(p) + v(z0) holds and the iteration contracts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{jacobian_det_at, FormalGroupLaw, Provenance};
use crate::ramified::{delta, different_valuation, DeltaReport, EisensteinExtension, Ext, RamifiedElement};
use crate::scalar::{teichmuller_units, Ctx, PadicScalar};
use crate::series::MultiSeries;
use crate::strictness::{decide_strict, extract_forms, StrictnessVerdict};
use crate::valuation::{rat, Rational, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolygonSegment {
    #[serde(serialize_with = "crate::valuation::serialize_rational")]
    pub slope: Rational,
    pub length: u32,
}

/// Lower convex hull of (degree, coefficient valuation) for a univariate
/// series, up to the first unit coefficient. Segment slopes are read as
/// root valuations: slope = (v_left - v_right) / (k_right - k_left).
#[derive(Debug, Clone, Serialize)]
pub struct NewtonPolygon {
    pub points: Vec<(u32, Valuation)>,
    pub vertices: Vec<(u32, Valuation)>,
    pub segments: Vec<PolygonSegment>,
}

impl NewtonPolygon {
    pub fn positive_segments(&self) -> impl Iterator<Item = &PolygonSegment> {
        self.segments.iter().filter(|s| s.slope > rat(0, 1))
    }
}

/// Sparse univariate view (degree, coefficient), ascending degree.
fn univariate_coeffs(series: &MultiSeries) -> Result<Vec<(u32, PadicScalar)>> {
    let (_, coeffs) = series.as_single_variable()?;
    Ok(coeffs)
}

pub fn newton_polygon(series: &MultiSeries) -> Result<NewtonPolygon> {
    let coeffs = univariate_coeffs(series)?;
    let mut first_unit = None;
    for (k, c) in &coeffs {
        if c.is_unit() {
            first_unit = Some(*k);
            break;
        }
    }
    let k0 = first_unit.ok_or(Error::NoUnitCoefficient)?;

    let mut points = Vec::new();
    let mut exact: Vec<(i64, Rational)> = Vec::new();
    for (k, c) in &coeffs {
        if *k > k0 {
            break;
        }
        let v = c.valuation();
        points.push((*k, v));
        match v {
            Valuation::Exact(r) => exact.push((*k as i64, r)),
            // A floor coefficient has true valuation >= N, strictly above
            // any hull through exact points (their valuations are < N).
            Valuation::AtLeast(_) => {}
            Valuation::Infinite => {}
        }
    }
    if exact.is_empty() {
        return Err(Error::IndeterminatePrecision(
            "no exact coefficient valuations below the first unit".into(),
        ));
    }

    // Monotone-chain lower hull; collinear interior points are dropped so
    // slopes come out strictly decreasing.
    let mut hull: Vec<(i64, Rational)> = Vec::new();
    for &(x, y) in &exact {
        while hull.len() >= 2 {
            let (x0, y0) = hull[hull.len() - 2];
            let (x1, y1) = hull[hull.len() - 1];
            let cross = (y1 - y0) * rat(x - x0, 1) - (y - y0) * rat(x1 - x0, 1);
            if cross >= rat(0, 1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }

    let vertices: Vec<(u32, Valuation)> = hull
        .iter()
        .map(|&(x, y)| (x as u32, Valuation::Exact(y)))
        .collect();
    let segments = hull
        .windows(2)
        .map(|w| {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            PolygonSegment {
                slope: (y0 - y1) / rat(x1 - x0, 1),
                length: (x1 - x0) as u32,
            }
        })
        .collect();
    Ok(NewtonPolygon { points, vertices, segments })
}

/// Per-component polygon data for dimension-1 groups and their products.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentTorsion {
    pub component: usize,
    pub polygon: NewtonPolygon,
    /// Positive slopes with multiplicities: valuations of nonzero roots.
    pub valuations: Vec<PolygonSegment>,
}

/// Valuation classes of mixed torsion points of a product, indexed by the
/// set of nonzero components.
#[derive(Debug, Clone, Serialize)]
pub struct MixedClass {
    pub support: Vec<usize>,
    #[serde(serialize_with = "crate::valuation::serialize_rational")]
    pub min_valuation: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct TorsionValuationReport {
    pub group: String,
    pub dim: usize,
    pub strictness: StrictnessVerdict,
    pub components: Vec<ComponentTorsion>,
    pub mixed_classes: Vec<MixedClass>,
    /// d - 1 for strict groups.
    pub e_pred: Option<u32>,
    pub tame: Option<bool>,
    /// Set when the prediction cannot be checked by root analysis here.
    pub predicted_unverified: bool,
    /// For strict dimension-1 groups and products: the polygon has exactly
    /// one positive segment of slope 1/(d-1) and multiplicity d-1.
    pub slopes_match_prediction: Option<bool>,
}

fn is_product_of_dim1(p: &Provenance) -> bool {
    match p {
        Provenance::Product(children) => children.iter().all(|c| !matches!(c, Provenance::Product(_) | Provenance::LinearChange { .. })),
        _ => false,
    }
}

pub fn torsion_valuations(group: &FormalGroupLaw) -> Result<TorsionValuationReport> {
    let mulp = group.mul_by_p()?;
    let fs = extract_forms(&mulp)?;
    let verdict = decide_strict(&fs);
    let g = group.dim();
    let mut report = TorsionValuationReport {
        group: group.provenance().to_string(),
        dim: g,
        strictness: verdict.clone(),
        components: Vec::new(),
        mixed_classes: Vec::new(),
        e_pred: None,
        tame: None,
        predicted_unverified: false,
        slopes_match_prediction: None,
    };
    if verdict.is_strict {
        let d = fs.degrees()[0];
        report.e_pred = Some(d - 1);
        report.tame = Some(!(d as u64 - 1).is_multiple_of(group.context().p()));
    }

    let analyzable = g == 1 || is_product_of_dim1(group.provenance());
    if !analyzable {
        report.predicted_unverified = true;
        return Ok(report);
    }

    for (i, comp) in mulp.tuple().components().iter().enumerate() {
        let polygon = newton_polygon(comp)?;
        let valuations: Vec<PolygonSegment> = polygon.positive_segments().cloned().collect();
        report.components.push(ComponentTorsion {
            component: i,
            polygon,
            valuations,
        });
    }

    if g > 1 {
        // Nonempty supports; min valuation of the class is the min of the
        // component slopes over the support.
        let slopes: Vec<Rational> = report
            .components
            .iter()
            .map(|c| c.valuations.first().map(|s| s.slope).unwrap_or(rat(0, 1)))
            .collect();
        for mask in 1u32..(1 << g) {
            let support: Vec<usize> = (0..g).filter(|i| mask & (1 << i) != 0).collect();
            let min_valuation = support.iter().map(|&i| slopes[i]).min().unwrap();
            report.mixed_classes.push(MixedClass { support, min_valuation });
        }
    }

    if verdict.is_strict {
        let d = fs.degrees()[0];
        let expect = PolygonSegment {
            slope: rat(1, d as i64 - 1),
            length: d - 1,
        };
        report.slopes_match_prediction = Some(
            report
                .components
                .iter()
                .all(|c| c.valuations.len() == 1 && c.valuations[0] == expect),
        );
    }
    Ok(report)
}

/// P(Z) = p + u Z^(d-1) realized as the extension Z^(d-1) + p u^-1, with
/// theta = pi a root of P and z the lifted torsion root matched to it.
#[derive(Debug, Clone)]
pub struct EisensteinWitness {
    pub ext: Ext,
    pub unit_coeff: PadicScalar,
    pub degree: u32,
    pub theta: RamifiedElement,
    pub root: RamifiedElement,
}

#[derive(Debug, Clone, Serialize)]
pub struct TorsionLift {
    #[serde(skip_serializing)]
    pub witness: EisensteinWitness,
    pub extension: String,
    pub root_display: String,
    /// The root in the power basis of pi: one W coefficient per slot.
    pub root_coefficients: Vec<String>,
    pub root_valuation: Valuation,
    /// v([p](z)) against the truncated series at the run precision; claims
    /// about the untruncated series stop at `residual_bound`.
    pub residual: Valuation,
    /// min(N - 1, (D+1)/(d-1)): the documented residual floor.
    #[serde(serialize_with = "crate::valuation::serialize_rational")]
    pub residual_bound: Rational,
    pub residual_meets_bound: bool,
    /// Index of the Teichmuller unit that met the descent criterion.
    pub start_attempts: usize,
}

fn sparse_derivative(coeffs: &[(u32, PadicScalar)]) -> Vec<(u32, PadicScalar)> {
    coeffs
        .iter()
        .filter(|(k, _)| *k >= 1)
        .map(|(k, c)| (k - 1, c.mul_i64(*k as i64)))
        .collect()
}

fn eval_sparse(ext: &Ext, coeffs: &[(u32, PadicScalar)], z: &RamifiedElement) -> Result<RamifiedElement> {
    // Horner over degree gaps, high degree first.
    let mut acc = RamifiedElement::zero(ext);
    let mut prev_deg: Option<u32> = None;
    for (k, c) in coeffs.iter().rev() {
        if let Some(d) = prev_deg {
            acc = acc.mul(&z.pow(d - k))?;
        }
        acc = acc.add(&RamifiedElement::from_scalar(ext, c.clone()))?;
        prev_deg = Some(*k);
    }
    if let Some(d) = prev_deg {
        acc = acc.mul(&z.pow(d))?;
    }
    Ok(acc)
}

/// The residual floor min(N-1, (D+1)/(d-1)).
fn residual_bound(precision: u32, trunc: u32, d: u32) -> Rational {
    rat(precision as i64 - 1, 1).min(rat(trunc as i64 + 1, d as i64 - 1))
}

/// Lifts a root of one univariate [p]-component inside the given extension
/// built from (d, u_host). Teichmuller starting points are tried in order
/// until the descent criterion v(f(c pi)) > v(p) + v(pi) holds.
fn lift_component_root(
    ctx: &Ctx,
    coeffs: &[(u32, PadicScalar)],
    d: u32,
    trunc: u32,
    ext_work: &Ext,
) -> Result<(RamifiedElement, RamifiedElement, usize)> {
    let work = ext_work.context().clone();
    let lifted: Vec<(u32, PadicScalar)> = coeffs
        .iter()
        .map(|(k, c)| Ok((*k, c.lift_precision(&work)?)))
        .collect::<Result<Vec<_>>>()?;
    let deriv = sparse_derivative(&lifted);
    let threshold = rat(1, 1) + rat(1, d as i64 - 1);
    let q = (ctx.p() as u128).pow(ctx.residue_degree());
    let candidates = teichmuller_units(&work, (q - 1) as usize)?;
    let pi = RamifiedElement::uniformizer(ext_work);

    let mut start = None;
    for (attempt, c) in candidates.iter().enumerate() {
        let z0 = pi.mul_scalar(c)?;
        let r0 = eval_sparse(ext_work, &lifted, &z0)?.valuation();
        if r0.definitely_gt(threshold) == Some(true) {
            start = Some((z0, attempt + 1));
            break;
        }
    }
    let (mut z, attempts) = start.ok_or(Error::LiftDiverged)?;
    let theta = z.clone();

    let n = ctx.precision();
    let target = residual_bound(n, trunc, d);
    // Iterate past the reporting scale: residuals beyond p^N are invisible
    // at the run precision, so v >= N + 1 is as deep as needed.
    let mut last_r: Option<Rational> = None;
    for _ in 0..(8 * n as usize + 8) {
        let f_z = eval_sparse(ext_work, &lifted, &z)?;
        let r = f_z.valuation();
        let r_exact = match r {
            Valuation::Exact(x) if x <= rat(n as i64, 1) => x,
            _ => break, // at or beyond the reporting scale
        };
        if let Some(prev) = last_r {
            if r_exact <= prev {
                return Err(Error::LiftDiverged);
            }
        }
        last_r = Some(r_exact);
        let f_prime_z = eval_sparse(ext_work, &deriv, &z)?;
        match f_prime_z.valuation() {
            Valuation::Exact(v) if v == rat(1, 1) => {}
            _ => return Err(Error::LiftDiverged),
        }
        let unit = f_prime_z.divide_exact_by_p_pow(1)?;
        let step = f_z.divide_exact_by_p_pow(1)?.mul(&unit.invert_unit()?)?;
        z = z.sub(&step)?;
    }
    let final_r = eval_sparse(ext_work, &lifted, &z)?.valuation();
    if final_r.definitely_ge(target) != Some(true) {
        return Err(Error::LiftDiverged);
    }
    Ok((z, theta, attempts))
}

/// Constructs the tame extension and Hensel-lifts a torsion root for a
/// strict dimension-1 group.
pub fn lift_torsion_root(group: &FormalGroupLaw) -> Result<TorsionLift> {
    if group.dim() != 1 {
        return Err(Error::UnsupportedDimension(group.dim()));
    }
    let ctx = group.context().clone();
    if ctx.precision() < 4 {
        return Err(Error::InvalidConfig(
            "torsion lifting needs coefficient precision >= 4".into(),
        ));
    }
    let mulp = group.mul_by_p()?;
    let fs = extract_forms(&mulp)?;
    let verdict = decide_strict(&fs);
    if !verdict.is_strict {
        return Err(Error::NotStrict);
    }
    let d = fs.degrees()[0];
    let coeffs = univariate_coeffs(&mulp.tuple().components()[0])?;
    let u0 = coeffs
        .iter()
        .find(|(k, _)| *k == d)
        .map(|(_, c)| c.clone())
        .expect("form degree has a unit coefficient");

    let work = ctx.with_precision(2 * ctx.precision() + 2)?;
    let u0_work = u0.lift_precision(&work)?;
    let const_term = u0_work
        .invert()?
        .mul_i64(ctx.p() as i64);
    let ext_work = EisensteinExtension::pure(&work, d as usize - 1, const_term)?;

    let trunc = mulp.tuple().components()[0].trunc_degree();
    let (z_work, theta_work, attempts) = lift_component_root(&ctx, &coeffs, d, trunc, &ext_work)?;

    let ext = ext_work.with_precision(&ctx)?;
    let z = z_work.reduce_precision(&ext)?;
    let theta = theta_work.reduce_precision(&ext)?;
    let residual = eval_sparse(&ext, &coeffs, &z)?.valuation();
    let bound = residual_bound(ctx.precision(), trunc, d);
    let witness = EisensteinWitness {
        ext: ext.clone(),
        unit_coeff: u0,
        degree: d,
        theta,
        root: z.clone(),
    };
    Ok(TorsionLift {
        extension: ext.polynomial_string(),
        root_display: z.to_string(),
        root_coefficients: z.coeffs().iter().map(|c| c.to_string()).collect(),
        root_valuation: z.valuation(),
        residual,
        residual_bound: bound,
        residual_meets_bound: residual.definitely_ge(bound) == Some(true),
        start_attempts: attempts,
        witness,
    })
}

/// v(P'(theta)) = (d-2)/(d-1) at the realized root, the derived pairwise
/// root distance 1/(d-1), and the Krasner gap v(z - theta) > 1/(d-1).
#[derive(Debug, Clone, Serialize)]
pub struct RootGeometryReport {
    pub v_p_prime_at_theta: Valuation,
    #[serde(serialize_with = "crate::valuation::serialize_rational")]
    pub v_p_prime_expected: Rational,
    pub v_p_prime_matches: bool,
    /// All pairwise root distances of P have this valuation.
    #[serde(serialize_with = "crate::valuation::serialize_rational")]
    pub pairwise_distance: Rational,
    pub krasner_gap: Valuation,
    pub krasner_gap_exceeds_distance: bool,
}

pub fn eisenstein_root_geometry(w: &EisensteinWitness) -> Result<RootGeometryReport> {
    let d = w.degree as i64;
    let ctx = w.ext.context();
    if (d - 1) % ctx.p() as i64 == 0 {
        return Err(Error::InvalidConfig("root spacing needs d - 1 coprime to p".into()));
    }
    // P'(theta) = (d-1) u theta^(d-2)
    let p_prime = w
        .theta
        .pow(w.degree - 2)
        .mul_scalar(&w.unit_coeff.mul_i64(d - 1))?;
    let v = p_prime.valuation();
    let expected = rat(d - 2, d - 1);
    let distance = rat(1, d - 1);
    let gap = w.root.sub(&w.theta)?.valuation();
    Ok(RootGeometryReport {
        v_p_prime_at_theta: v,
        v_p_prime_expected: expected,
        v_p_prime_matches: v == Valuation::Exact(expected),
        pairwise_distance: distance,
        krasner_gap: gap,
        krasner_gap_exceeds_distance: gap.definitely_gt(distance) == Some(true),
    })
}

/// One torsion point of the group: per-component roots with structural
/// zeros for the components outside the support.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    #[serde(skip_serializing)]
    pub coords: Vec<RamifiedElement>,
    pub coords_display: Vec<String>,
    /// Each coordinate as its tuple of W coefficients in the pi basis.
    pub coords_basis: Vec<Vec<String>>,
    pub support: Vec<usize>,
    /// Per-component residuals against the truncated [p] components.
    pub residuals: Vec<Valuation>,
    #[serde(serialize_with = "crate::valuation::serialize_rational")]
    pub min_valuation: Rational,
    pub uniformizer_index: usize,
    pub uniformizer_valuation_is_one_over_e: bool,
    pub jacobian_valuation: Valuation,
}

#[derive(Debug, Clone, Serialize)]
pub struct TameTorsionReport {
    pub group: String,
    pub dim: usize,
    pub strictness: StrictnessVerdict,
    pub form_degree: u32,
    /// [K(P) : K] = d - 1.
    pub e: u32,
    pub tame: bool,
    pub extension: String,
    pub lift: TorsionLift,
    pub geometry: RootGeometryReport,
    pub witnesses: Vec<WitnessReport>,
    /// Every nonzero coordinate valuation equals 1/e, so O_K[x_1..x_g] is
    /// generated by a uniformizer.
    pub integral_basis_check: bool,
}

/// End-to-end verification for strict dimension-1 groups and equal-height
/// products of dimension-1 groups.
pub fn verify_tame_ramification(group: &FormalGroupLaw) -> Result<TameTorsionReport> {
    let ctx = group.context().clone();
    let mulp = group.mul_by_p()?;
    let fs = extract_forms(&mulp)?;
    let verdict = decide_strict(&fs);
    if !verdict.is_strict {
        return Err(Error::NotStrict);
    }
    let g = group.dim();
    if g > 1 && !is_product_of_dim1(group.provenance()) {
        return Err(Error::UnsupportedDimension(g));
    }
    if ctx.precision() < 4 {
        return Err(Error::InvalidConfig(
            "torsion lifting needs coefficient precision >= 4".into(),
        ));
    }
    let d = fs.degrees()[0];
    let e = d - 1;
    let tame = !(e as u64).is_multiple_of(ctx.p());

    // Host extension from component 0, then all component roots inside it.
    let components: Vec<Vec<(u32, PadicScalar)>> = mulp
        .tuple()
        .components()
        .iter()
        .map(univariate_coeffs)
        .collect::<Result<Vec<_>>>()?;
    let u_host = components[0]
        .iter()
        .find(|(k, _)| *k == d)
        .map(|(_, c)| c.clone())
        .expect("strict component has a unit form coefficient");
    let work = ctx.with_precision(2 * ctx.precision() + 2)?;
    let const_term = u_host.lift_precision(&work)?.invert()?.mul_i64(ctx.p() as i64);
    let ext_work = EisensteinExtension::pure(&work, e as usize, const_term)?;
    let ext = ext_work.with_precision(&ctx)?;

    let mut roots = Vec::with_capacity(g);
    let mut lift0 = None;
    for (i, coeffs) in components.iter().enumerate() {
        let (z_work, theta_work, attempts) =
            lift_component_root(&ctx, coeffs, d, group.trunc_degree(), &ext_work)?;
        let z = z_work.reduce_precision(&ext)?;
        if i == 0 {
            let theta = theta_work.reduce_precision(&ext)?;
            let residual = eval_sparse(&ext, coeffs, &z)?.valuation();
            let bound = residual_bound(ctx.precision(), group.trunc_degree(), d);
            lift0 = Some(TorsionLift {
                extension: ext.polynomial_string(),
                root_display: z.to_string(),
                root_coefficients: z.coeffs().iter().map(|c| c.to_string()).collect(),
                root_valuation: z.valuation(),
                residual,
                residual_bound: bound,
                residual_meets_bound: residual.definitely_ge(bound) == Some(true),
                start_attempts: attempts,
                witness: EisensteinWitness {
                    ext: ext.clone(),
                    unit_coeff: u_host.clone(),
                    degree: d,
                    theta,
                    root: z.clone(),
                },
            });
        }
        roots.push(z);
    }
    let lift = lift0.expect("component 0 lifted");
    let geometry = eisenstein_root_geometry(&lift.witness)?;

    let mut witnesses = Vec::new();
    for mask in 1u32..(1 << g) {
        let support: Vec<usize> = (0..g).filter(|i| mask & (1 << i) != 0).collect();
        let coords: Vec<RamifiedElement> = (0..g)
            .map(|i| {
                if support.contains(&i) {
                    roots[i].clone()
                } else {
                    RamifiedElement::zero(&ext)
                }
            })
            .collect();
        let residuals = components
            .iter()
            .enumerate()
            .map(|(i, coeffs)| Ok(eval_sparse(&ext, coeffs, &coords[i])?.valuation()))
            .collect::<Result<Vec<_>>>()?;
        let min_valuation = support
            .iter()
            .map(|&i| coords[i].valuation().finite_exact())
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .expect("nonempty support");
        let uniformizer_index = support[0];
        let (_, jac_v) = jacobian_det_at(&mulp, &coords)?;
        witnesses.push(WitnessReport {
            coords_display: coords.iter().map(|c| c.to_string()).collect(),
            coords_basis: coords
                .iter()
                .map(|z| z.coeffs().iter().map(|c| c.to_string()).collect())
                .collect(),
            support,
            residuals,
            min_valuation,
            uniformizer_index,
            uniformizer_valuation_is_one_over_e: min_valuation == rat(1, e as i64),
            jacobian_valuation: jac_v,
            coords,
        });
    }
    let integral_basis_check = witnesses.iter().all(|w| w.uniformizer_valuation_is_one_over_e);

    Ok(TameTorsionReport {
        group: group.provenance().to_string(),
        dim: g,
        strictness: verdict,
        form_degree: d,
        e,
        tame,
        extension: ext.polynomial_string(),
        lift,
        geometry,
        witnesses,
        integral_basis_check,
    })
}

/// Per-coordinate delta reports for every witness: at least one coordinate
/// has delta < 0, and the uniformizer coordinate has delta = -v(D_{L/K}).
#[derive(Debug, Clone, Serialize)]
pub struct DerivationKernelReport {
    pub witness_deltas: Vec<Vec<DeltaReport>>,
    #[serde(serialize_with = "crate::valuation::serialize_rational")]
    pub v_different: Rational,
    pub every_witness_has_negative_delta: bool,
    pub uniformizer_delta_matches_different: bool,
}

pub fn verify_derivation_kernel_exclusion(report: &TameTorsionReport) -> Result<DerivationKernelReport> {
    let mut witness_deltas = Vec::new();
    let mut all_negative = true;
    let mut uniformizer_matches = true;
    let mut v_d = None;
    for w in &report.witnesses {
        let ext = w.coords[w.uniformizer_index].extension().clone();
        let vd = different_valuation(&ext)?;
        v_d = Some(vd);
        let mut reports = Vec::new();
        for coord in &w.coords {
            reports.push(delta(coord, None)?);
        }
        if !reports.iter().any(|r| r.delta < rat(0, 1)) {
            all_negative = false;
        }
        if reports[w.uniformizer_index].delta != -vd {
            uniformizer_matches = false;
        }
        witness_deltas.push(reports);
    }
    Ok(DerivationKernelReport {
        witness_deltas,
        v_different: v_d.ok_or_else(|| Error::ShapeMismatch("no witnesses".into()))?,
        every_witness_has_negative_delta: all_negative,
        uniformizer_delta_matches_different: uniformizer_matches,
    })
}
