use focklaser::emission;
use focklaser::exact::TruncatedBasis;
use focklaser::laser_direct::{self, MultiLevelGain};
use focklaser::laser_rate::{self, LossModel, RateOptions, RegimeThresholds};
use focklaser::liouvillian::{LiouvillianModel, LiouvillianOptions};
use focklaser::spectrum;
use focklaser::{GainParams, PhotonDistribution, Quadrature, RabiParams};
use rayon::prelude::*;

use crate::config::{Command, Loss, Method, Operator, Resolved};
use crate::table::{Cell, Envelope};
use crate::CliError;

fn rabi(cfg: &Resolved, g: f64) -> Result<RabiParams, CliError> {
    Ok(RabiParams::new(g)?.with_lambda(cfg.lambda)?)
}

fn gain(cfg: &Resolved, r: f64, gamma: f64) -> GainParams {
    GainParams { epsilon: cfg.epsilon, delta: cfg.delta, gamma, r, kappa: cfg.kappa }
}

fn rate_options(cfg: &Resolved) -> RateOptions {
    RateOptions {
        loss: match cfg.loss {
            Loss::Harmonic => LossModel::Harmonic,
            Loss::MatrixElement => LossModel::MatrixElement,
        },
    }
}

fn quadrature(op: Operator) -> Quadrature {
    match op {
        Operator::A => Quadrature::Bare,
        Operator::B => Quadrature::Displaced,
    }
}

fn n_max_or_default(cfg: &Resolved, p: &RabiParams) -> usize {
    cfg.n_max.unwrap_or_else(|| laser_rate::default_n_max(p))
}

fn bool_cell(b: bool) -> Cell {
    Cell::Text(b.to_string())
}

fn summarize(env: &mut Envelope, d: &PhotonDistribution) {
    env.summary.insert("mean".into(), d.mean.into());
    env.summary.insert("std_dev".into(), d.std_dev().into());
    env.summary.insert("fano".into(), d.fano.into());
    env.summary.insert("entropy".into(), d.entropy.into());
    env.summary.insert("n_max".into(), d.n_max().into());
}

/// Runs `f` over `items` on a pool of `jobs` threads, keeping input order.
fn par_map<T: Sync, U: Send>(
    jobs: usize,
    items: &[T],
    f: impl Fn(&T) -> Result<U, CliError> + Sync + Send,
) -> Result<Vec<U>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    pool.install(|| items.par_iter().map(f).collect())
}

pub fn run(cfg: &Resolved) -> Result<Envelope, CliError> {
    match cfg.command {
        Command::Spectrum => spectrum_cmd(cfg),
        Command::Blockade => blockade(cfg),
        Command::GainLoss => gain_loss(cfg),
        Command::SteadyState => steady_state(cfg),
        Command::Sweep => sweep(cfg),
        Command::RegimeMap => regime_map(cfg),
        Command::Transient => transient(cfg),
    }
}

fn spectrum_cmd(cfg: &Resolved) -> Result<Envelope, CliError> {
    let p = rabi(cfg, cfg.g[0])?;
    let table = spectrum::spectrum_table(&p, n_max_or_default(cfg, &p))?;
    let mut env = Envelope::new(cfg.echo(), &["n", "sigma", "energy", "gap"]);
    for l in table.levels {
        env.push(vec![l.n.into(), Cell::Int(l.sigma.sign() as i64), l.energy.into(), l.gap.into()]);
    }
    if let Ok(nc) = spectrum::critical_photon_number(&p) {
        env.summary.insert("critical_photon_number".into(), nc.into());
    }
    Ok(env)
}

fn blockade(cfg: &Resolved) -> Result<Envelope, CliError> {
    let p = rabi(cfg, cfg.g[0])?;
    let gp = gain(cfg, cfg.r[0], cfg.gamma[0]).validated(&p)?;
    let t = cfg.t.unwrap_or(std::f64::consts::FRAC_PI_2 / cfg.epsilon);
    let profile = emission::blockade_profile(&p, &gp, t, n_max_or_default(cfg, &p))?;
    let mut env = Envelope::new(cfg.echo(), &["n", "probability"]);
    env.summary.insert("t".into(), t.into());
    for b in profile {
        env.push(vec![b.n.into(), b.probability.into()]);
    }
    Ok(env)
}

fn gain_loss(cfg: &Resolved) -> Result<Envelope, CliError> {
    let p = rabi(cfg, cfg.g[0])?;
    let gp = gain(cfg, cfg.r[0], cfg.gamma[0]);
    let c = laser_rate::gain_loss_with(&p, &gp, n_max_or_default(cfg, &p), &rate_options(cfg))?;
    let birth = c.birth();
    let mut env = Envelope::new(cfg.echo(), &["n", "gain_coefficient", "gain", "loss", "f", "g_ratio"]);
    for i in 0..c.n.len() {
        env.push(vec![c.n[i].into(), c.gain[i].into(), birth[i].into(), c.loss[i].into(), c.f[i].into(), c.g_ratio[i].into()]);
    }
    env.summary.insert("threshold_pump".into(), laser_rate::threshold_pump(&gp).into());
    Ok(env)
}

fn rate_or_direct(cfg: &Resolved, p: &RabiParams, gp: &GainParams) -> Result<PhotonDistribution, CliError> {
    Ok(match (cfg.method, cfg.n_max) {
        (Method::Rate, Some(n)) => laser_rate::steady_state_with(p, gp, n, &rate_options(cfg))?,
        (Method::Rate, None) => laser_rate::steady_state_auto(p, gp, &rate_options(cfg))?,
        (Method::Direct, n) => {
            let mlg = MultiLevelGain::from_gain(gp, cfg.bath_ratio)?;
            match n {
                Some(n) => laser_direct::steady_state_direct(p, gp, &mlg, n)?,
                None => laser_direct::steady_state_direct_auto(p, gp, &mlg)?,
            }
        }
        (Method::Liouvillian, _) => return Err(CliError::Usage("the Liouvillian is only available in `steady-state`".into())),
    })
}

fn steady_state(cfg: &Resolved) -> Result<Envelope, CliError> {
    let p = rabi(cfg, cfg.g[0])?;
    let gp = gain(cfg, cfg.r[0], cfg.gamma[0]);
    if cfg.method != Method::Liouvillian {
        let d = rate_or_direct(cfg, &p, &gp)?;
        let mut env = Envelope::new(cfg.echo(), &["n", "probability"]);
        summarize(&mut env, &d);
        for (n, q) in d.probs.iter().enumerate() {
            env.push(vec![n.into(), (*q).into()]);
        }
        return Ok(env);
    }
    let opts = LiouvillianOptions {
        interaction: quadrature(cfg.interaction),
        jump: quadrature(cfg.jump),
        rwa: cfg.rwa,
        allow_degenerate: cfg.allow_degenerate,
        ..LiouvillianOptions::default()
    };
    let model = LiouvillianModel::new(&p, &gp, TruncatedBasis::new(cfg.n_fock)?, opts)?;
    let ss = model.steady_state()?;
    let u = model.photon_statistics(&ss)?;
    let mut env = Envelope::new(cfg.echo(), &["n", "probability", "p_minus", "p_plus"]);
    summarize(&mut env, &u.distribution);
    for (k, v) in [
        ("residual", ss.residual),
        ("trace", ss.trace),
        ("min_eigenvalue", ss.min_eigenvalue),
        ("hermiticity_defect", ss.hermiticity_defect),
        ("excited_population", model.excited_population(&ss)),
        ("unlabelled_population", u.residue),
        ("off_diagonal", u.off_diagonal),
    ] {
        env.summary.insert(k.into(), v.into());
    }
    env.summary.insert("degenerate".into(), bool_cell(ss.degenerate));
    for (n, q) in u.distribution.probs.iter().enumerate() {
        let [m, pl] = u.branches[n];
        env.push(vec![n.into(), (*q).into(), m.into(), pl.into()]);
    }
    Ok(env)
}

fn sweep(cfg: &Resolved) -> Result<Envelope, CliError> {
    if cfg.method == Method::Liouvillian {
        return Err(CliError::Usage("`sweep` supports --method rate|direct".into()));
    }
    if cfg.r.windows(2).any(|w| w[1] <= w[0]) || cfg.r.iter().any(|r| !(*r > 0.0)) {
        return Err(CliError::Usage("sweep pump values must be positive and strictly ascending".into()));
    }
    let points: Vec<(f64, f64)> = cfg.g.iter().flat_map(|&g| cfg.r.iter().map(move |&r| (g, r))).collect();
    let dists = par_map(cfg.jobs, &points, |&(g, r)| {
        let p = rabi(cfg, g)?;
        rate_or_direct(cfg, &p, &gain(cfg, r, cfg.gamma[0]))
    })?;
    let mut env = Envelope::new(cfg.echo(), &["g", "r", "mean", "std_dev", "fano"]);
    env.summary.insert("threshold_pump".into(), laser_rate::threshold_pump(&gain(cfg, 0.0, cfg.gamma[0])).into());
    for ((g, r), d) in points.iter().zip(dists) {
        env.push(vec![(*g).into(), (*r).into(), d.mean.into(), d.std_dev().into(), d.fano.into()]);
    }
    Ok(env)
}

fn regime_map(cfg: &Resolved) -> Result<Envelope, CliError> {
    let p = rabi(cfg, cfg.g[0])?;
    let n_c = spectrum::critical_photon_number(&p).ok();
    let th = RegimeThresholds::default();
    let points: Vec<(f64, f64)> = cfg.gamma.iter().flat_map(|&gm| cfg.r.iter().map(move |&r| (r, gm))).collect();
    let base = gain(cfg, cfg.r[0], cfg.gamma[0]);
    let out = par_map(cfg.jobs, &points, |&(r, gm)| Ok(laser_rate::regime_point(&p, &base, r, gm, n_c, &th)?))?;
    let mut env = Envelope::new(cfg.echo(), &["r", "gamma", "regime", "mean", "fano", "modes", "flatness", "cutoff"]);
    if let Some(nc) = n_c {
        env.summary.insert("critical_photon_number".into(), nc.into());
    }
    for pt in out {
        env.push(vec![
            pt.r.into(),
            pt.gamma.into(),
            format!("{:?}", pt.regime).into(),
            pt.mean.into(),
            pt.fano.into(),
            pt.modes.len().into(),
            pt.flatness.unwrap_or(f64::NAN).into(),
            pt.cutoff.unwrap_or(f64::NAN).into(),
        ]);
    }
    Ok(env)
}

fn transient(cfg: &Resolved) -> Result<Envelope, CliError> {
    let t_final = cfg.t.ok_or_else(|| CliError::Usage("`transient` needs --t".into()))?;
    if !(t_final.is_finite() && t_final > 0.0) || cfg.samples == 0 {
        return Err(CliError::Usage("--t must be positive and --samples at least 1".into()));
    }
    let p = rabi(cfg, cfg.g[0])?;
    let gp = gain(cfg, cfg.r[0], cfg.gamma[0]);
    let n_max = n_max_or_default(cfg, &p);
    let mut d = PhotonDistribution::fock(cfg.n0, n_max)?;
    let mut env = Envelope::new(cfg.echo(), &["t", "mean", "std_dev", "fano"]);
    env.push(vec![0.0.into(), d.mean.into(), d.std_dev().into(), d.fano.into()]);
    let dt = t_final / cfg.samples as f64;
    let ode = laser_rate::OdeOptions::default();
    for k in 1..=cfg.samples {
        d = laser_rate::transient_with(&d, &p, &gp, dt, n_max, &rate_options(cfg), &ode)?;
        let t = if k == cfg.samples { t_final } else { dt * k as f64 };
        env.push(vec![t.into(), d.mean.into(), d.std_dev().into(), d.fano.into()]);
    }
    summarize(&mut env, &d);
    Ok(env)
}
