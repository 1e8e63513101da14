//! Command pipelines. Each returns a [`Report`] or an input error.

use dirac_core::courant::{
    assemble_theta, assemble_theta_curved, classify, d_theta, derived_bracket, is_gauge_automorphism, pairing,
    verify_master, GaugeField, ThetaDecomposition,
};
use dirac_core::deform::{DeformationState, DiracContext, ExactVerdict, Extension, ObstructionResult, StateRecord};
use dirac_core::liealgebroid::{Certificate, Cochain, LieComplex};
use dirac_core::rothstein::{bracket, bracket_curved, to_darboux};
use dirac_core::sample::{random_homogeneous, random_section, Shape};
use dirac_core::specfile::SpecFile;
use dirac_core::{parse_element, Element, Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{Check, Report, Status};

/// Default coefficient-degree truncation when neither the command line nor
/// the spec sets one.
pub const DEFAULT_TRUNCATION: u32 = 2;

/// Number of random samples per randomized check in `verify`.
pub const VERIFY_SAMPLES: usize = 8;

fn report_for(command: &str, file: &SpecFile) -> Report {
    Report::new(command, &file.name, &file.digest())
}

fn seed_for(file: &SpecFile, seed: Option<u64>) -> u64 {
    seed.or(file.defaults.seed).unwrap_or(0)
}

fn truncation_for(file: &SpecFile, truncate: Option<u32>) -> u32 {
    truncate.or(file.defaults.truncation).unwrap_or(DEFAULT_TRUNCATION)
}

fn master_check(theta: &ThetaDecomposition) -> Check {
    let master = verify_master(theta);
    let mut check = Check::new("master equation", Status::from_bool(master.passed()));
    check.push("{Theta,Theta}", &master.theta_theta);
    for c in &master.components {
        check.push(c.name, &c.residual);
    }
    if let Some(first) = master.failures().next() {
        check.push("violated", first.name);
    }
    check
}

/// First failing Courant axiom on seeded random sections, if any.
fn axiom_violation(theta: &ThetaDecomposition, rng: &mut ChaCha8Rng, samples: usize) -> Result<Option<(&'static str, Element)>> {
    let g = theta.gens();
    let br = |a: &Element, b: &Element| derived_bracket(theta, a, b);
    for _ in 0..samples {
        let e1 = random_section(rng, g, 1);
        let e2 = random_section(rng, g, 1);
        let e3 = random_section(rng, g, 1);
        let jacobi = &(&br(&e1, &br(&e2, &e3)?)? - &br(&br(&e1, &e2)?, &e3)?) - &br(&e2, &br(&e1, &e3)?)?;
        if !jacobi.is_zero() {
            return Ok(Some(("Jacobi", jacobi)));
        }
        let symmetric = &(&br(&e1, &e2)? + &br(&e2, &e1)?) - &d_theta(theta, &pairing(&e1, &e2)?)?;
        if !symmetric.is_zero() {
            return Ok(Some(("symmetric part", symmetric)));
        }
    }
    Ok(None)
}

/// `verify <spec>`: master equation, classification, seeded axiom checks and,
/// when a connection is present, the curved-basis round trip.
pub fn cmd_verify(command: &str, file: &SpecFile, seed: Option<u64>) -> Result<Report> {
    let mut report = report_for(command, file);
    let spec = &file.spec;
    let theta = assemble_theta(spec);
    report.add(master_check(&theta));

    report.add(match classify(&theta) {
        Ok(class) => Check::new("classification", Status::Pass)
            .with("kind", &class)
            .with("psi vanishes", class.psi_zero)
            .with("phi vanishes", class.phi_zero)
            .with("{mu,phi} vanishes", class.mu_phi_zero),
        Err(e) => Check::new("classification", Status::Fail).with("error", e),
    });

    let seed = seed_for(file, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let violation = axiom_violation(&theta, &mut rng, VERIFY_SAMPLES)?;
    let mut axioms = Check::new("courant axioms on random sections", Status::from_bool(violation.is_none()))
        .with("seed", seed)
        .with("samples", VERIFY_SAMPLES);
    if let Some((axiom, residual)) = violation {
        axioms.push("violated", axiom);
        axioms.push("residual", residual);
    }
    report.add(axioms);

    if let Some(conn) = spec.connection() {
        let curved = assemble_theta_curved(spec, Some(conn))?;
        let theta_residual = &to_darboux(&curved, conn)? - &theta.theta();
        let mut mismatch = None;
        let curved_gens = curved.gens();
        for _ in 0..VERIFY_SAMPLES {
            let x = random_homogeneous(&mut rng, curved_gens, Shape::new(1, 1).q_degree(1).terms(2));
            let y = random_homogeneous(&mut rng, curved_gens, Shape::new(1, 2).q_degree(1).terms(2));
            let lhs = to_darboux(&bracket_curved(&x, &y, conn)?, conn)?;
            let rhs = bracket(&to_darboux(&x, conn)?, &to_darboux(&y, conn)?)?;
            if lhs != rhs {
                mismatch = Some(&lhs - &rhs);
                break;
            }
        }
        let ok = theta_residual.is_zero() && mismatch.is_none();
        let mut check = Check::new("curved basis round trip", Status::from_bool(ok))
            .with("flat", conn.curvature().is_flat())
            .with("Theta residual", theta_residual);
        if let Some(m) = mismatch {
            check.push("bracket residual", m);
        }
        report.add(check);
    }
    Ok(report)
}

fn parse_section(file: &SpecFile, text: &str, what: &str) -> Result<Element> {
    let e = parse_element(text, file.spec.gens())?;
    if !e.has_total_degree(1) || e.has_momenta() {
        return Err(Error::Degree(format!("{what} must be a section (a combination of e_i and f_i), got {e}")));
    }
    Ok(e)
}

/// `bracket <spec> <e1> <e2>`: the derived bracket of two sections.
pub fn cmd_bracket(command: &str, file: &SpecFile, e1: &str, e2: &str) -> Result<Report> {
    let mut report = report_for(command, file);
    let x = parse_section(file, e1, "e1")?;
    let y = parse_section(file, e2, "e2")?;
    let theta = assemble_theta(&file.spec);
    let value = derived_bracket(&theta, &x, &y)?;
    report.add(
        Check::new("derived bracket", Status::Pass)
            .with("e1", &x)
            .with("e2", &y)
            .with("[[e1,e2]]", &value)
            .with("<e1,e2>", pairing(&x, &y)?),
    );
    Ok(report)
}

fn verdict_label(v: ExactVerdict, bound: u32) -> String {
    match v {
        ExactVerdict::Exact => "exact".into(),
        ExactVerdict::NotExact => "not exact".into(),
        ExactVerdict::NotExactAtTruncation => format!("obstructed at truncation {bound}"),
    }
}

fn obstruction_check(o: &ObstructionResult, omega: Option<&Cochain>) -> Check {
    let status = match o.verdict {
        ExactVerdict::Exact => Status::Pass,
        ExactVerdict::NotExact => Status::Fail,
        ExactVerdict::NotExactAtTruncation => Status::TruncationUnknown,
    };
    let mut check = Check::new(format!("order {}", o.order), status)
        .with(format!("R_{}", o.order), &o.residual)
        .with("closed", o.closed)
        .with("verdict", verdict_label(o.verdict, o.truncation));
    if let Some(w) = omega {
        check.push(format!("omega_{}", o.order), w);
    }
    match &o.certificate {
        Some(Certificate::OutOfRange { term }) => check.push("certificate term", term),
        Some(Certificate::Functional { functional }) => check.push("certificate functional", functional),
        None => {}
    }
    check
}

/// Arguments of `deform`.
#[derive(Clone, Debug, Default)]
pub struct DeformArgs {
    pub omega1: Option<String>,
    pub order: usize,
    pub truncate: Option<u32>,
    pub resume: Option<StateRecord>,
}

/// `deform <spec> --omega1 <expr> --order N --truncate D`.
pub fn cmd_deform(command: &str, file: &SpecFile, args: &DeformArgs) -> Result<Report> {
    let mut report = report_for(command, file);
    let theta = assemble_theta(&file.spec);
    let master = master_check(&theta);
    if master.status != Status::Pass {
        report.add(master);
        return Ok(report);
    }
    let ctx = DiracContext::new(theta)?;
    let digest = file.digest();
    let bound = truncation_for(file, args.truncate);

    let mut state = match (&args.resume, &args.omega1) {
        (Some(record), _) => {
            let state = DeformationState::from_record(&ctx, record, &digest)?;
            report.add(
                Check::new("resumed state", Status::Pass)
                    .with("order", state.order())
                    .with("verified through", state.residual_ok_to()),
            );
            state
        }
        (None, Some(text)) => {
            let omega = Cochain::new(parse_element(text, ctx.gens())?, 2)?;
            let d = ctx.complex().d(&omega);
            let check = Check::new("order 1", Status::from_bool(d.is_zero()))
                .with("omega_1", &omega)
                .with("d_L omega_1", &d);
            if !d.is_zero() {
                report.add(check);
                return Ok(report);
            }
            report.add(check);
            ctx.first_order(omega)?
        }
        (None, None) => return Err(Error::InvalidSpec("deform needs --omega1 or --resume".into())),
    };

    while state.order() < args.order {
        match ctx.extend_order(&state, bound)? {
            Extension::Extended(next, obstruction) => {
                report.add(obstruction_check(&obstruction, next.omegas().last()));
                state = next;
            }
            Extension::Obstructed(obstruction) => {
                report.add(obstruction_check(&obstruction, None));
                break;
            }
        }
    }
    report.state = Some(state.to_record(&digest));
    Ok(report)
}

/// `cohomology <spec> --degree m --truncate D`.
pub fn cmd_cohomology(command: &str, file: &SpecFile, degree: u32, truncate: Option<u32>) -> Result<Report> {
    let mut report = report_for(command, file);
    let theta = assemble_theta(&file.spec);
    let complex = LieComplex::new(theta.mu())?;
    let bound = truncation_for(file, truncate);
    let dims = complex.cohomology_dim(degree, bound);
    let scope = if dims.truncation_relative {
        format!("coefficients of degree at most {bound}")
    } else {
        "exact (point model)".into()
    };
    report.add(
        Check::new(format!("H^{degree}"), Status::Pass)
            .with("dim ker", dims.kernel)
            .with("dim im", dims.image)
            .with(format!("dim H^{degree}"), dims.cohomology)
            .with("scope", scope),
    );
    Ok(report)
}

/// `gauge <spec> --B <expr> --bound D`.
pub fn cmd_gauge(command: &str, file: &SpecFile, b: &str, bound: u32) -> Result<Report> {
    let mut report = report_for(command, file);
    let theta = assemble_theta(&file.spec);
    let field = GaugeField::new(parse_element(b, file.spec.gens())?)?;
    let result = is_gauge_automorphism(&file.spec, &theta, &field, bound)?;
    let mut check = Check::new("gauge automorphism", Status::from_bool(result.automorphism))
        .with("B", field.form())
        .with("pairs checked", result.pairs_checked);
    if let Some(v) = &result.counterexample {
        check.push("e1", &v.e1);
        check.push("e2", &v.e2);
        check.push("[[tau e1, tau e2]]", &v.transformed_bracket);
        check.push("tau [[e1, e2]]", &v.bracket_transformed);
    }
    report.add(check);
    report.add(
        Check::new("closedness criterion", Status::from_bool(result.automorphism == result.closed))
            .with("dB", &result.d_b)
            .with("closed", result.closed),
    );
    Ok(report)
}

/// Exit status for an error: 1 for mathematical failures, 2 for bad input.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::MasterFailed(_)
        | Error::PsiNonzero
        | Error::NotClosed(_)
        | Error::InvalidFirstOrder(_)
        | Error::ClosednessViolated(_)
        | Error::StateNotVerified { .. }
        | Error::NotPoisson(_) => 1,
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dirac_core::specfile::bundled;

    fn load(name: &str) -> SpecFile {
        SpecFile::parse(bundled(name).unwrap()).unwrap()
    }

    #[test]
    fn bracket_of_vector_fields() {
        let r = cmd_bracket("bracket", &load("standard_courant_R3"), "e1", "q1*e2").unwrap();
        let value = &r.check("derived bracket").unwrap().values[2];
        assert_eq!(value.value, "e2");
    }

    #[test]
    fn verify_reports_classification_and_failures() {
        let r = cmd_verify("verify", &load("standard_courant_R3"), None).unwrap();
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.check("classification").unwrap().values[0].value, "L and L* Dirac, Lie bialgebroid");
        let r = cmd_verify("verify", &load("broken_aff1"), None).unwrap();
        assert_eq!(r.exit_code(), 1);
        let master = r.check("master equation").unwrap();
        assert!(master.values.iter().any(|e| e.key == "violated" && e.value == "{phi,psi}+{mu,gamma}"));
        assert_eq!(cmd_verify("verify", &load("curved_R2"), None).unwrap().exit_code(), 0);
    }

    #[test]
    fn deform_reaches_the_requested_order_or_stops() {
        let args = DeformArgs { omega1: Some("q2*f2*f3".into()), order: 3, truncate: Some(1), resume: None };
        let r = cmd_deform("deform", &load("standard_courant_R3"), &args).unwrap();
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.state.as_ref().unwrap().omegas, vec!["q2*f2*f3", "0", "0"]);

        let args = DeformArgs { omega1: Some("q3*f1*f2".into()), ..args };
        assert_eq!(cmd_deform("deform", &load("standard_courant_R3"), &args).unwrap().exit_code(), 1);

        let args = DeformArgs { omega1: Some("f3*f4".into()), order: 4, truncate: None, resume: None };
        let r = cmd_deform("deform", &load("obstructed_k4_point"), &args).unwrap();
        assert_eq!(r.exit_code(), 1);
        let order2 = r.check("order 2").unwrap();
        assert_eq!(order2.status, Status::Fail);
        assert_eq!(order2.values[0].value, "-f1*f3*f4");
    }

    #[test]
    fn cohomology_of_aff1() {
        let dims: Vec<String> = (0..3)
            .map(|m| cmd_cohomology("cohomology", &load("aff1_point"), m, None).unwrap().checks[0].values[2].value.clone())
            .collect();
        assert_eq!(dims, ["1", "1", "0"]);
    }

    #[test]
    fn gauge_closed_and_open() {
        let r = cmd_gauge("gauge", &load("standard_courant_R3"), "q2*f1*f3 - q3*f1*f2", 1).unwrap();
        assert_eq!(r.exit_code(), 1);
        let r = cmd_gauge("gauge", &load("standard_courant_R3"), "f1*f2 + q1*f1*f3", 1).unwrap();
        assert_eq!(r.exit_code(), 0);
        assert!(cmd_gauge("gauge", &load("aff1_point"), "f1*f2", 1).is_err());
    }
}
