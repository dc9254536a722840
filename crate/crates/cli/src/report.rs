use std::process::ExitCode;

use emosc::fixtures::{fixture, Fixture};
use emosc::oracle::{
    annihilation_residual, discretize, lowest_eigenpairs, solve_1d, Grid1D, GridField, GridSpec, Potential1D,
    SpectralDerivative, StencilOrder,
};
use emosc::spectrum::{landau_center, landau_frame, landau_levels};
use emosc::states::PolyGaussianState;
use emosc::ConfigurationTag;

use crate::commands::{as_fixture, load_system, solvable};
use crate::error::CliError;
use crate::output::{num, Table};
use crate::{CompareArgs, GridArg, OracleArgs};

const LEVELS: usize = 6;
const LEVEL_TOL_2D: f64 = 1e-3;
const LEVEL_TOL_1D: f64 = 1e-4;
const ANNIHILATION_TOL: f64 = 1e-8;

struct Check {
    kind: &'static str,
    index: String,
    analytic: f64,
    numeric: f64,
    tolerance: f64,
    relative: bool,
}

impl Check {
    fn abs_error(&self) -> f64 {
        (self.numeric - self.analytic).abs()
    }

    fn rel_error(&self) -> f64 {
        if self.analytic == 0.0 {
            self.abs_error()
        } else {
            self.abs_error() / self.analytic.abs()
        }
    }

    fn passed(&self) -> bool {
        let e = if self.relative { self.rel_error() } else { self.abs_error() };
        e <= self.tolerance
    }
}

fn planar_checks(f: &Fixture, grid: Option<GridArg>) -> Result<Vec<Check>, CliError> {
    let spec = match grid {
        Some(g) => GridSpec::new(g.nx, g.ny, g.lx, g.ly)?.centered(f.center()?),
        None => f.grid(128, 8.0)?,
    };
    let op = discretize(&f.lab_hamiltonian(), &spec, StencilOrder::Fourth)?;
    let numeric = lowest_eigenpairs(&op, LEVELS)?;
    let analytic = f.lowest_levels(LEVELS)?;
    let mut checks: Vec<Check> = analytic
        .iter()
        .zip(&numeric)
        .map(|(&(n1, n2, a), (e, _))| Check {
            kind: "level",
            index: format!("{n1};{n2}"),
            analytic: a,
            numeric: *e,
            tolerance: LEVEL_TOL_2D,
            relative: true,
        })
        .collect();

    let modes = f.modes()?;
    let hbar = f.system.hbar;
    let center = f.center()?;
    let ground = PolyGaussianState::ground(&modes, hbar)?.with_center(center);
    let psi = GridField::sample(spec, |x, y| ground.eval(x, y));
    let spectral = SpectralDerivative::new(spec);
    for (i, u) in modes.u.iter().enumerate() {
        checks.push(Check {
            kind: "annihilation",
            index: (i + 1).to_string(),
            analytic: 0.0,
            numeric: annihilation_residual(&spectral, &psi, u, center, hbar),
            tolerance: ANNIHILATION_TOL,
            relative: false,
        });
    }
    Ok(checks)
}

fn landau_checks(f: &Fixture) -> Result<Vec<Check>, CliError> {
    let s = landau_frame(&f.system)?;
    let w1 = s.derive().tilde_omega_1;
    let lambda = (s.mass * w1 / s.hbar).sqrt();
    let grid = Grid1D::new(601, 10.0 / lambda, landau_center(&s, f.k)?)?;
    let numeric = solve_1d(&Potential1D::landau(&s, f.k), s.mass, s.hbar, grid, LEVELS)?;
    numeric
        .iter()
        .enumerate()
        .map(|(n, (e, _))| {
            Ok(Check {
                kind: "landau_level",
                index: n.to_string(),
                analytic: landau_levels(&s, n as u32, f.k)?.value,
                numeric: *e,
                tolerance: LEVEL_TOL_1D,
                relative: true,
            })
        })
        .collect()
}

/// Writes the report and returns whether every check passed.
fn run_report(command: &str, f: &Fixture, grid: Option<GridArg>, out: Option<&std::path::Path>) -> Result<bool, CliError> {
    let tag = solvable(&f.system)?;
    let landau = matches!(tag, ConfigurationTag::LandauY { .. } | ConfigurationTag::BothPlanarFree { .. });
    let checks = if landau { landau_checks(f)? } else { planar_checks(f, grid)? };
    let mut t = Table::new(command)
        .system(&f.system)
        .param("fixture", f.name)
        .param("k", num(f.k));
    if let Some(g) = grid {
        t = t.param("grid", format!("{},{},{},{}", g.nx, g.ny, num(g.lx), num(g.ly)));
    }
    let mut t = t.columns(&[
        "check",
        "index",
        "analytic",
        "numeric",
        "abs_error",
        "rel_error",
        "tolerance",
        "pass",
    ]);
    for c in &checks {
        t.row(&[
            c.kind.to_string(),
            c.index.clone(),
            num(c.analytic),
            num(c.numeric),
            num(c.abs_error()),
            num(c.rel_error()),
            num(c.tolerance),
            c.passed().to_string(),
        ]);
    }
    let passed = checks.iter().filter(|c| c.passed()).count();
    let ok = passed == checks.len();
    let summary = format!(
        "summary: {} {passed}/{} checks within tolerance",
        if ok { "PASS" } else { "FAIL" },
        checks.len()
    );
    t.comment(&summary);
    t.write(out)?;
    if out.is_some() {
        println!("{summary}");
    }
    Ok(ok)
}

pub fn oracle(a: &OracleArgs) -> Result<ExitCode, CliError> {
    let f = fixture(&a.fixture).ok_or_else(|| {
        let names: Vec<&str> = emosc::fixtures::all_fixtures().iter().map(|f| f.name).collect();
        CliError::Usage(format!("unknown fixture `{}`; known: {}", a.fixture, names.join(", ")))
    })?;
    run_report("oracle", &f, a.grid, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn compare(a: &CompareArgs) -> Result<ExitCode, CliError> {
    let s = load_system(&a.common)?;
    let f = as_fixture(s, a.levels.map_or(0.0, |l| l.k));
    let ok = run_report("compare", &f, a.grid, a.common.out.as_deref())?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
