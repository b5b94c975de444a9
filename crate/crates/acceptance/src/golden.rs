//! Fixed cases with known closed-form answers, stored as JSON next to the crate
//! and compiled in.

use holonomy::hilbert::inner_product;
use holonomy::majorana::{
    coefficients_to_roots, matched_distance, overlap_general, overlap_with_pure, pure_product_rep,
    pure_product_state, MajoranaRep, Spinor, Star,
};
use holonomy::npc::{geodesic_lift, profile_to_lift, CurveFrame, Grid, RealProfile};
use holonomy::sphere::star_trajectory;
use holonomy::StateVector;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::{CriterionResult, Measure};

pub const BASIS_STARS: &str = include_str!("../golden/majorana_basis_stars.json");
pub const PAIR_EXPANSION: &str = include_str!("../golden/majorana_pair_expansion.json");
pub const PURE_OVERLAPS: &str = include_str!("../golden/pure_overlaps.json");
pub const GENERAL_PURE_OVERLAP: &str = include_str!("../golden/general_pure_overlap.json");
pub const GEODESIC_PURE_PURE: &str = include_str!("../golden/geodesic_stars_pure_pure.json");
pub const GEODESIC_PURE_GENERAL: &str = include_str!("../golden/geodesic_stars_pure_general.json");
pub const NONNEGATIVE_PROFILE: &str = include_str!("../golden/nonnegative_profile.json");

#[derive(Deserialize)]
struct BasisStars {
    state: StateVector,
    stars: Vec<Star>,
}

#[derive(Deserialize)]
struct PairExpansion {
    #[serde(flatten)]
    rep: MajoranaRep,
    amplitudes: Vec<Complex64>,
}

#[derive(Deserialize)]
struct PureOverlap {
    n: usize,
    xi_prime: Spinor,
    xi: Spinor,
    overlap: Complex64,
}

#[derive(Deserialize)]
struct GeneralPure {
    n: usize,
    #[serde(flatten)]
    rep: MajoranaRep,
    xi: Spinor,
    overlap: Complex64,
}

#[derive(Deserialize)]
struct StarSample {
    s: f64,
    stars: Vec<Star>,
}

#[derive(Deserialize)]
struct GeodesicStars {
    theta0: f64,
    samples: Vec<StarSample>,
}

#[derive(Deserialize)]
struct Profile {
    theta0: f64,
    values: Vec<Vec<f64>>,
}

fn parse<T: DeserializeOwned>(out: &mut CriterionResult, text: &str) -> Option<T> {
    match serde_json::from_str(text) {
        Ok(v) => Some(v),
        Err(e) => {
            out.fail(format!("fixture does not parse: {e}"));
            None
        }
    }
}

fn check(title: &str, f: impl FnOnce(&mut CriterionResult) -> Measure) -> CriterionResult {
    let mut out = CriterionResult::labelled("golden".into(), title);
    let m = f(&mut out);
    out.with(m)
}

fn basis_stars() -> CriterionResult {
    check("stars of the three-dimensional basis vectors", |out| {
        let mut m = Measure::new("matched star distance", 1e-12);
        for case in parse::<Vec<BasisStars>>(out, BASIS_STARS).unwrap_or_default() {
            let d = coefficients_to_roots(&case.state).and_then(|rep| matched_distance(&rep.stars(), &case.stars));
            out.take(&mut m, d);
        }
        m
    })
}

fn pair_expansion() -> CriterionResult {
    check("two-spinor expansion", |out| {
        let mut m = Measure::new("amplitude error", 1e-12);
        for case in parse::<Vec<PairExpansion>>(out, PAIR_EXPANSION).unwrap_or_default() {
            let got = case.rep.expand();
            let err = if got.len() == case.amplitudes.len() {
                got.iter().zip(&case.amplitudes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            m.record(err);
        }
        m
    })
}

fn pure_overlaps() -> CriterionResult {
    check("pure product overlap law", |out| {
        let mut m = Measure::new("overlap error", 1e-12);
        for case in parse::<Vec<PureOverlap>>(out, PURE_OVERLAPS).unwrap_or_default() {
            let err = (|| -> holonomy::Result<_> {
                let a = pure_product_state(&case.xi_prime, case.n)?;
                let b = pure_product_state(&case.xi, case.n)?;
                Ok((inner_product(&a, &b)? - case.overlap).norm())
            })();
            out.take(&mut m, err);
        }
        m
    })
}

fn general_pure_overlap() -> CriterionResult {
    check("general against pure product overlap", |out| {
        let mut m = Measure::new("overlap error", 1e-12);
        for case in parse::<Vec<GeneralPure>>(out, GENERAL_PURE_OVERLAP).unwrap_or_default() {
            if case.rep.dim() != case.n {
                out.fail(format!("fixture with n={} has {} spinors", case.n, case.rep.spinors.len()));
                continue;
            }
            m.record((overlap_with_pure(&case.rep, &case.xi) - case.overlap).norm());
            let err = (|| -> holonomy::Result<_> {
                let pure = pure_product_rep(&case.xi, case.n)?;
                Ok((overlap_general(&case.rep, &pure)? - case.overlap).norm())
            })();
            out.take(&mut m, err);
        }
        m
    })
}

fn geodesic_stars(title: &str, text: &str, second: usize) -> CriterionResult {
    check(title, |out| {
        let mut m = Measure::new("matched star distance", 1e-10);
        let Some(fx) = parse::<GeodesicStars>(out, text) else {
            return m;
        };
        let res = (|| -> holonomy::Result<_> {
            let (s0, c0) = (fx.theta0 / 2.0).sin_cos();
            let psi1 = StateVector::basis(3, 0);
            let mut amps = vec![Complex64::new(0.0, 0.0); 3];
            amps[0] = Complex64::new(c0, 0.0);
            amps[second] = Complex64::new(s0, 0.0);
            let lift = geodesic_lift(&psi1, &StateVector::new(amps)?, Grid::unit(fx.samples.len())?)?;
            star_trajectory(&lift)
        })();
        match res {
            Ok(traj) => {
                for (got, want) in traj.iter().zip(&fx.samples) {
                    if (got.s - want.s).abs() > 1e-12 {
                        out.fail(format!("sample at s={} where {} was expected", got.s, want.s));
                        continue;
                    }
                    out.take(&mut m, matched_distance(&got.stars, &want.stars));
                }
            }
            Err(e) => out.error(e),
        }
        m
    })
}

fn nonnegative_profile() -> CriterionResult {
    check("nonnegative profile overlaps in (0, 1]", |out| {
        let mut m = Measure::new("imaginary part of overlaps", 1e-15);
        let Some(fx) = parse::<Profile>(out, NONNEGATIVE_PROFILE) else {
            return m;
        };
        let res = (|| -> holonomy::Result<_> {
            let grid = Grid::unit(fx.values.len())?;
            let dim = fx.values.first().map_or(0, Vec::len);
            let profile = RealProfile {
                grid,
                values: fx.values.clone(),
            };
            let lift = profile_to_lift(&CurveFrame::standard(dim, fx.theta0)?, &profile)?;
            let states = lift.states();
            let mut overlaps = Vec::new();
            for a in states {
                for b in states {
                    overlaps.push(inner_product(a, b)?);
                }
            }
            Ok(overlaps)
        })();
        match res {
            Ok(overlaps) => {
                for o in overlaps {
                    if !(o.re > 0.0 && o.re <= 1.0 + 1e-15) {
                        out.fail(format!("overlap {o} outside (0, 1]"));
                    }
                    m.record(o.im.abs());
                }
            }
            Err(e) => out.error(e),
        }
        m
    })
}

pub fn run_golden() -> Vec<CriterionResult> {
    vec![
        basis_stars(),
        pair_expansion(),
        pure_overlaps(),
        general_pure_overlap(),
        geodesic_stars("geodesic stars, pure to pure", GEODESIC_PURE_PURE, 2),
        geodesic_stars("geodesic stars, pure to general", GEODESIC_PURE_GENERAL, 1),
        nonnegative_profile(),
    ]
}
