use std::f64::consts::PI;
use std::process::ExitCode;

use num_complex::Complex64 as C64;

use emosc::config::parse_system;
use emosc::dynamics::{center_at, squeezed_uncertainties, time_grid, CoherentSpec, SqueezeSpec};
use emosc::fixtures::Fixture;
use emosc::oracle::GridSpec;
use emosc::spectrum::{
    full_levels, landau_levels, planar_energy, tilted_levels, EnergyResult, LevelIndex,
};
use emosc::states::{landau_wavefunction, PolyGaussianState};
use emosc::{classify, ConfigurationTag, PhysicalSystem};

use crate::error::CliError;
use crate::output::{num, Table};
use crate::{EvolveArgs, Levels, SpectrumArgs, SystemArgs, WavefunctionArgs};

const UNSOLVABLE: &str = "the Hamiltonian could not be reduced to a quadratic form, and the problem could not be solved analytically";

pub fn load_system(args: &SystemArgs) -> Result<PhysicalSystem, CliError> {
    let path = args.system.display().to_string();
    let text = std::fs::read_to_string(&args.system).map_err(|source| CliError::Read {
        path: path.clone(),
        source,
    })?;
    parse_system(&text).map_err(|source| CliError::Config { path, source })
}

/// Classifies the system, rejecting the case without a quadratic form.
pub fn solvable(s: &PhysicalSystem) -> Result<ConfigurationTag, CliError> {
    match classify(s) {
        ConfigurationTag::Unsolvable { mirrored } => {
            let (w, e) = if mirrored { ("omega_x", "E_x") } else { ("omega_y", "E_y") };
            Err(CliError::Unsolvable(format!("{w} = 0 with {e} != 0: {UNSOLVABLE}")))
        }
        tag => Ok(tag),
    }
}

pub fn as_fixture(s: PhysicalSystem, k: f64) -> Fixture {
    Fixture {
        name: "system",
        system: s,
        k,
    }
}

fn index(l: &Levels) -> LevelIndex {
    LevelIndex {
        n1: l.n1,
        n2: l.n2,
        n3: l.n3,
        k: l.k,
    }
}

fn with_parts(base: EnergyResult, extra: &[(&'static str, f64)]) -> EnergyResult {
    let mut parts: Vec<(&'static str, f64)> = base.contributions.iter().map(|c| (c.name, c.value)).collect();
    parts.extend_from_slice(extra);
    EnergyResult::from_parts(&parts)
}

/// Bound z levels, or the free plane wave `ħ²k²/2M`. A linear z potential
/// has a continuous spectrum and contributes nothing here.
fn z_parts(s: &PhysicalSystem, n3: u32, k: f64) -> Vec<(&'static str, f64)> {
    if s.omega_z > 0.0 {
        vec![
            ("z_mode", s.hbar * s.omega_z * (f64::from(n3) + 0.5)),
            ("offset_z", -(s.charge * s.e_z).powi(2) / (2.0 * s.mass * s.omega_z.powi(2))),
        ]
    } else if s.e_z == 0.0 {
        vec![("z_plane_wave", (s.hbar * k).powi(2) / (2.0 * s.mass))]
    } else {
        Vec::new()
    }
}

fn level_energy(s: &PhysicalSystem, tag: ConfigurationTag, idx: &LevelIndex) -> emosc::Result<EnergyResult> {
    match tag {
        ConfigurationTag::Generic => full_levels(s, idx),
        ConfigurationTag::FreeZ | ConfigurationTag::LinearZ => {
            Ok(with_parts(planar_energy(s, idx.n1, idx.n2)?, &z_parts(s, idx.n3, idx.k)))
        }
        ConfigurationTag::LandauY { .. } | ConfigurationTag::BothPlanarFree { .. } => {
            let z = if s.omega_z > 0.0 { z_parts(s, idx.n3, 0.0) } else { Vec::new() };
            Ok(with_parts(landau_levels(s, idx.n1, idx.k)?, &z))
        }
        ConfigurationTag::TiltedB => tilted_levels(s, idx),
        found @ ConfigurationTag::Unsolvable { .. } => Err(emosc::Error::WrongConfiguration {
            expected: "a solvable configuration",
            found,
        }),
    }
}

fn lowest(s: &PhysicalSystem, tag: ConfigurationTag, count: usize) -> emosc::Result<Vec<(LevelIndex, EnergyResult)>> {
    let n = count as u32;
    let candidates: Vec<LevelIndex> = match tag {
        ConfigurationTag::Generic => (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .map(|(n1, n2, n3)| LevelIndex { n1, n2, n3, k: 0.0 })
            .collect(),
        ConfigurationTag::LandauY { .. } | ConfigurationTag::BothPlanarFree { .. } => {
            (0..n).map(|n1| LevelIndex::planar(n1, 0)).collect()
        }
        _ => (0..n)
            .flat_map(|a| (0..n).map(move |b| LevelIndex::planar(a, b)))
            .collect(),
    };
    let mut rows = candidates
        .into_iter()
        .map(|idx| level_energy(s, tag, &idx).map(|e| (idx, e)))
        .collect::<emosc::Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        a.1.value
            .total_cmp(&b.1.value)
            .then((a.0.n1, a.0.n2, a.0.n3).cmp(&(b.0.n1, b.0.n2, b.0.n3)))
    });
    rows.truncate(count);
    Ok(rows)
}

pub fn spectrum(a: &SpectrumArgs) -> Result<ExitCode, CliError> {
    let s = load_system(&a.common)?;
    let tag = solvable(&s)?;
    let mut t = Table::new("spectrum").system(&s);
    let rows = match &a.levels {
        Some(l) => {
            t = t.param("levels", format!("{},{},{},{}", l.n1, l.n2, l.n3, num(l.k)));
            let idx = index(l);
            vec![(idx, level_energy(&s, tag, &idx)?)]
        }
        None => {
            t = t.param("count", a.count);
            lowest(&s, tag, a.count)?
        }
    };
    if tag == ConfigurationTag::LinearZ {
        t.comment("z spectrum is continuous (uniform force) and is not included");
    }
    let mut t = t.columns(&["n1", "n2", "n3", "k", "energy", "contributions"]);
    for (idx, e) in rows {
        let parts: Vec<String> = e.contributions.iter().map(|c| format!("{}={}", c.name, num(c.value))).collect();
        t.row(&[
            idx.n1.to_string(),
            idx.n2.to_string(),
            idx.n3.to_string(),
            num(idx.k),
            num(e.value),
            parts.join(";"),
        ]);
    }
    t.write(a.common.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn modes(a: &SystemArgs) -> Result<ExitCode, CliError> {
    let s = load_system(a)?;
    solvable(&s)?;
    let m = as_fixture(s, 0.0).modes()?;
    let mut t = Table::new("modes")
        .system(&s)
        .columns(&["mode", "sigma", "epsilon", "component", "u_re", "u_im", "v_re", "v_im"]);
    const COMPONENTS: [&str; 4] = ["x", "p_x", "y", "p_y"];
    for i in 0..2 {
        for (c, name) in COMPONENTS.iter().enumerate() {
            let u = m.u[i][c];
            let v = m.v[i][c];
            t.row(&[
                (i + 1).to_string(),
                num(m.sigma(i)),
                m.epsilon[i].to_string(),
                (*name).to_string(),
                num(u.re),
                num(u.im),
                num(v.re),
                num(v.im),
            ]);
        }
    }
    t.write(a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn groundstate(a: &SystemArgs) -> Result<ExitCode, CliError> {
    let s = load_system(a)?;
    solvable(&s)?;
    let f = as_fixture(s, 0.0);
    let modes = f.modes()?;
    let center = f.center()?;
    let g = PolyGaussianState::ground(&modes, s.hbar)?.with_center(center);
    let m = g.moments(s.hbar)?;
    let u = m.uncertainties();
    let form = &g.form;
    let rows = [
        ("lambda_x2", form.lambda_x2()),
        ("lambda_y2", form.lambda_y2()),
        ("lambda_xy", form.lambda_xy()),
        ("norm_const", form.norm_const()),
        ("center_x", center[0]),
        ("center_y", center[1]),
        ("delta_x", u[0]),
        ("delta_p_x", u[1]),
        ("delta_y", u[2]),
        ("delta_p_y", u[3]),
        ("product_x", u[0] * u[1]),
        ("product_y", u[2] * u[3]),
        ("energy", g.energy(&modes.hamiltonian, s.hbar)?),
    ];
    let mut t = Table::new("groundstate").system(&s).columns(&["quantity", "value"]);
    for (k, v) in rows {
        t.row(&[k.to_string(), num(v)]);
    }
    t.write(a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn wavefunction(a: &WavefunctionArgs) -> Result<ExitCode, CliError> {
    let s = load_system(&a.common)?;
    let tag = solvable(&s)?;
    let l = a.levels.unwrap_or_default();
    let landau = matches!(tag, ConfigurationTag::LandauY { .. } | ConfigurationTag::BothPlanarFree { .. });
    let f = as_fixture(s, l.k);
    let grid = match (a.grid, landau) {
        (Some(g), _) => {
            let center = if landau { [0.0, 0.0] } else { f.center()? };
            GridSpec::new(g.nx, g.ny, g.lx, g.ly)?.centered(center)
        }
        (None, false) => f.grid(64, 5.0)?,
        (None, true) => {
            let w1 = emosc::spectrum::landau_frame(&s)?.derive().tilde_omega_1;
            let lambda = (s.mass * w1 / s.hbar).sqrt();
            let reach = 5.0 / lambda + emosc::spectrum::landau_center(&s, l.k)?.abs();
            GridSpec::square(64, reach)?
        }
    };
    let eval: Box<dyn Fn(f64, f64) -> emosc::Result<C64>> = if landau {
        Box::new(move |x, y| landau_wavefunction(&s, l.n1, l.k, x, y))
    } else {
        let state = PolyGaussianState::number_state(&f.modes()?, s.hbar, l.n1, l.n2)?.with_center(f.center()?);
        Box::new(move |x, y| Ok(state.eval(x, y)))
    };
    let mut t = Table::new("wavefunction")
        .system(&s)
        .param("levels", format!("{},{},{},{}", l.n1, l.n2, l.n3, num(l.k)))
        .param("grid", format!("{},{},{},{}", grid.nx, grid.ny, num(grid.lx), num(grid.ly)))
        .param("gauge", if landau { "A = (0, B_z x, 0)" } else { "reduced" })
        .columns(&["x", "y", "re", "im"]);
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let (x, y) = (grid.x(ix), grid.y(iy));
            let v = eval(x, y)?;
            t.row(&[num(x), num(y), num(v.re), num(v.im)]);
        }
    }
    t.write(a.common.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn pair(v: &Option<Vec<C64>>) -> [C64; 2] {
    match v.as_deref() {
        Some([a, b]) => [*a, *b],
        _ => [C64::from(0.0); 2],
    }
}

pub fn evolve(a: &EvolveArgs) -> Result<ExitCode, CliError> {
    let s = load_system(&a.common)?;
    solvable(&s)?;
    let modes = as_fixture(s, 0.0).modes()?;
    let [a1, a2] = pair(&a.alpha);
    let [z1, z2] = pair(&a.zeta);
    let coherent = CoherentSpec::new(a1, a2);
    let squeeze = SqueezeSpec::new(z1, z2);
    let l = a.levels.unwrap_or_default();
    let (duration, samples) = a.time.unwrap_or((2.0 * PI / modes.sigma2, 201));
    if samples == 0 {
        return Err(CliError::Usage("--time needs at least one sample".into()));
    }
    let mut t = Table::new("evolve")
        .system(&s)
        .param("alpha", format!("{},{} {},{}", num(a1.re), num(a1.im), num(a2.re), num(a2.im)))
        .param("zeta", format!("{},{} {},{}", num(z1.re), num(z1.im), num(z2.re), num(z2.im)))
        .param("levels", format!("{},{}", l.n1, l.n2))
        .param("time", format!("{},{}", num(duration), samples))
        .param("coordinates", "relative to the equilibrium, reduced gauge")
        .columns(&["t", "x", "p_x", "y", "p_y", "delta_x", "delta_p_x", "delta_y", "delta_p_y"]);
    for time in time_grid(duration, samples) {
        let c = center_at(&coherent, &modes, s.hbar, time);
        let d = squeezed_uncertainties(&squeeze, &modes, s.hbar, [l.n1, l.n2], time)?;
        let mut row = vec![num(time)];
        row.extend(c.iter().map(|v| num(*v)));
        row.extend(d.iter().map(|v| num(*v)));
        t.row(&row);
    }
    t.write(a.common.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}
