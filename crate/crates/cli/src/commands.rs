use std::path::Path;

use holonomy::angles::{
    build_canonical_n2, build_canonical_n3, extract_angles_with, pancharatnam_phase_with, CanonicalParamsN2,
    CanonicalParamsN3, Triad, XiBoundary,
};
use holonomy::coherent::{coherent_bargmann, solve_dependent_coherent_with, CoherentTriadParams};
use holonomy::hilbert::bargmann_invariant_with;
use holonomy::majorana::{coefficients_to_roots_with, roots_to_coefficients, MajoranaRep};
use holonomy::npc::{
    generate_npc_profile, geodesic_lift, loop_geometric_phase, npc_lift_between, profile_to_lift, verify_npc,
    CurveFrame, Grid,
};
use holonomy::phase::{principal_arg, wrap_pi};
use holonomy::sphere::{bi_factorization_with, phase_from_solid_angles, reduce_triad_with, star_trajectory_with};
use holonomy::StateVector;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::csvio::{read_curve, write_curve, write_star_pairs, write_stars};
use crate::format::json;
use crate::{read_input, CliError, Command, Formula, MajoranaCommand, NpcCommand, Outcome, Space};

fn parse<T: DeserializeOwned>(path: Option<&Path>, what: &str) -> Result<T, CliError> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("expected {what}: {e}")))
}

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::Bi { input } => bi(input.as_deref(), cfg),
        Command::Angles { input } => angles(input.as_deref(), cfg),
        Command::Reconstruct { space, input } => reconstruct(*space, input.as_deref(), cfg),
        Command::Phase { formula, input } => phase(*formula, input.as_deref(), cfg),
        Command::Majorana(sub) => majorana(sub, cfg),
        Command::Npc(sub) => npc(sub, cfg),
        Command::Decompose { input } => decompose(input.as_deref(), cfg),
        Command::Stars { input } => stars(input.as_deref(), cfg),
        Command::Selftest { criteria, no_golden } => selftest(criteria, *no_golden, cfg),
    }
}

fn bi(input: Option<&Path>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let states: Vec<StateVector> = parse(input, "a JSON array of states")?;
    let states = states.iter().map(StateVector::normalized).collect::<holonomy::Result<Vec<_>>>()?;
    let delta = bargmann_invariant_with(&states, &cfg.tolerances)?;
    Ok(Outcome::ok(json(&json!({
        "bargmann": delta,
        "modulus": delta.norm(),
        "phase": wrap_pi(-principal_arg(delta)),
    }))?))
}

fn angles(input: Option<&Path>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let triad: Triad = parse(input, "a triad (array of three states)")?;
    let a = extract_angles_with(&triad, &cfg.tolerances)?;
    let mut v = serde_json::to_value(a).map_err(|e| CliError::Failure(e.to_string()))?;
    v["geometric_phase"] = json!(a.geometric_phase());
    Ok(Outcome::ok(json(&v)?))
}

fn reconstruct(space: Space, input: Option<&Path>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match space {
        Space::N2 => {
            let p: CanonicalParamsN2 = parse(input, "n2 parameters")?;
            Ok(Outcome::ok(json(&build_canonical_n2(&p)?)?))
        }
        Space::N3 => {
            let p: CanonicalParamsN3 = parse(input, "n3 parameters")?;
            let built = build_canonical_n3(&p)?;
            let mut out = Outcome::ok(json(&built.triad)?);
            match built.boundary {
                Some(XiBoundary::Lower) => out.warnings.push("xi = 0: the triad spans only two dimensions".into()),
                Some(XiBoundary::Upper) => out.warnings.push("xi = pi/2: upper end of the xi interval".into()),
                None => {}
            }
            Ok(out)
        }
        Space::Coherent => {
            let p: CoherentTriadParams = parse(input, "coherent parameters")?;
            let labels = p.labels()?;
            let pair = solve_dependent_coherent_with(p.theta12, p.theta31, p.phi_prime, &cfg.tolerances)?;
            Ok(Outcome::ok(json(&json!({
                "labels": labels,
                "theta23": pair.theta23,
                "phi23": pair.phi23(p.phi12, p.phi31),
                "phi_g": pair.phi_g,
                "bargmann": coherent_bargmann(&labels),
            }))?))
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhaseParams {
    theta12: f64,
    theta31: f64,
    phi: f64,
    xi: Option<f64>,
}

fn phase(formula: Formula, input: Option<&Path>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p: PhaseParams = parse(input, "{theta12, theta31, phi[, xi]}")?;
    let xi = match (formula, p.xi) {
        (Formula::N2, None) => None,
        (Formula::N2, Some(_)) => return Err(CliError::Usage("xi is only used with --formula n3".into())),
        (Formula::N3, Some(x)) => Some(x),
        (Formula::N3, None) => return Err(CliError::Usage("--formula n3 needs xi".into())),
    };
    let phase = pancharatnam_phase_with(p.theta12, p.theta31, p.phi, xi, &cfg.tolerances)?;
    Ok(Outcome::ok(json(&json!({ "phase": phase }))?))
}

fn majorana(cmd: &MajoranaCommand, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        MajoranaCommand::Roots { input } => {
            let psi: StateVector = parse(input.as_deref(), "a state")?;
            Ok(Outcome::ok(json(&coefficients_to_roots_with(&psi, &cfg.tolerances)?)?))
        }
        MajoranaCommand::Stars { input } => {
            let psi: StateVector = parse(input.as_deref(), "a state")?;
            let rep = coefficients_to_roots_with(&psi, &cfg.tolerances)?;
            Ok(Outcome::ok(write_stars(&rep.stars())))
        }
        MajoranaCommand::Rebuild { input } => {
            let rep: MajoranaRep = parse(input.as_deref(), "a Majorana representation")?;
            Ok(Outcome::ok(json(&roots_to_coefficients(&rep)?.normalized()?)?))
        }
    }
}

fn npc(cmd: &NpcCommand, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = Grid::unit(cfg.samples)?;
    match cmd {
        NpcCommand::Generate {
            theta0,
            epsilon,
            dim,
            pair,
        } => {
            let lift = if let Some(path) = pair {
                let states: Vec<StateVector> = parse(Some(path), "a JSON array of two states")?;
                let [a, b] = <[StateVector; 2]>::try_from(states)
                    .map_err(|v| CliError::Usage(format!("expected two states, got {}", v.len())))?;
                if *epsilon == 0.0 {
                    geodesic_lift(&a, &b, grid)?
                } else {
                    npc_lift_between(&a, &b, *epsilon, grid)?
                }
            } else {
                let theta0 = theta0.ok_or_else(|| CliError::Usage("--theta0 or --pair is required".into()))?;
                if *dim == 2 && *epsilon == 0.0 {
                    let frame = CurveFrame::standard(2, theta0)?;
                    geodesic_lift(&frame.psi1(), &frame.psi2(), grid)?
                } else {
                    let profile = generate_npc_profile(theta0, *dim, *epsilon, grid)?;
                    profile_to_lift(&CurveFrame::standard(*dim, theta0)?, &profile)?
                }
            };
            Ok(Outcome::ok(write_curve(&lift)))
        }
        NpcCommand::Verify { input } => {
            let lift = read_curve(&read_input(input.as_deref())?, &cfg.tolerances)?;
            let report = verify_npc(&lift, cfg.subgrid, &cfg.tolerances)?;
            Ok(Outcome {
                text: json(&report)?,
                warnings: Vec::new(),
                failed: !report.passed,
            })
        }
        NpcCommand::Phase { segments } => {
            let lifts = segments
                .iter()
                .map(|p| read_curve(&read_input(Some(p))?, &cfg.tolerances))
                .collect::<Result<Vec<_>, _>>()?;
            let lp = loop_geometric_phase(&lifts, cfg.subgrid, cfg.quadrature_tolerance, &cfg.tolerances)?;
            Ok(Outcome::ok(json(&lp)?))
        }
    }
}

fn decompose(input: Option<&Path>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let triad: Triad = parse(input, "a triad (array of three states)")?;
    let tol = &cfg.tolerances;
    let red = reduce_triad_with(&triad, tol)?;
    let fac = bi_factorization_with(&red, tol)?;
    let solid = phase_from_solid_angles(&triad)?;
    let delta: Complex64 = fac.product();
    Ok(Outcome::ok(json(&json!({
        "angles": red.angles,
        "xi": red.xi,
        "psi3_scale": red.rep3.scale,
        "psi3_spinors": red.rep3.spinors,
        "residual": red.residual,
        "factors": fac.factors,
        "factor_phases": fac.phases,
        "prefactor": fac.prefactor,
        "bargmann": delta,
        "total_phase": fac.total_phase,
        "star_base": solid.base,
        "stars3": solid.stars3,
        "solid_angles": solid.solid_angles,
        "solid_angle_phase": solid.phase,
    }))?))
}

fn stars(input: Option<&Path>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let lift = read_curve(&read_input(input)?, &cfg.tolerances)?;
    Ok(Outcome::ok(write_star_pairs(&star_trajectory_with(&lift, &cfg.tolerances)?)))
}

fn selftest(criteria: &[u32], no_golden: bool, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ids: Vec<u32> = if criteria.is_empty() {
        (1..=holonomy_acceptance::CRITERION_COUNT).collect()
    } else {
        criteria.to_vec()
    };
    let mut results = Vec::new();
    for id in ids {
        results.push(
            holonomy_acceptance::run_criterion(id, cfg.seed)
                .ok_or_else(|| CliError::Usage(format!("no criterion {id}")))?,
        );
    }
    if !no_golden {
        results.extend(holonomy_acceptance::golden::run_golden());
    }
    let mut text = String::new();
    for r in &results {
        text.push_str(&r.line());
        text.push('\n');
        for note in &r.notes {
            text.push_str(&format!("      {note}\n"));
        }
    }
    let failing = results.iter().filter(|r| !r.passed()).count();
    text.push_str(&format!("{} checks, {failing} failing\n", results.len()));
    Ok(Outcome {
        text,
        warnings: Vec::new(),
        failed: failing > 0,
    })
}
