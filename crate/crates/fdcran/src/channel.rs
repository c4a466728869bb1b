//! Network topology and full-dimensional MIMO channel generation.
//!
//! The channel of every (user, radio-unit) pair factors into
//!
//! - a path-loss gain `alpha` fixed by geometry,
//! - a unit-norm elevation direction that persists across coherence blocks
//!   (negligible elevation scattering makes the elevation covariance rank-1),
//! - an azimuth fading vector redrawn independently every coherence block
//!   with an exponential spatial correlation profile.
//!
//! All draws are deterministic functions of `(seed, stream label, indices)`;
//! see [`crate::rng::substream`]. Distinct users, radio units and blocks use
//! disjoint substreams, so enlarging the network or evaluating more blocks
//! never perturbs the draws of existing indices.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::{kron_vec, sqrt_psd, vec_norm_sqr, C64, CMat, CVec};
use crate::rng::substream;

/// Rectangular table indexed by (user j, radio unit i).
#[derive(Debug, Clone, PartialEq)]
pub struct PairTable<T> {
    pub n_ms: usize,
    pub n_ru: usize,
    data: Vec<T>,
}

impl<T> PairTable<T> {
    pub fn from_fn(n_ms: usize, n_ru: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n_ms * n_ru);
        for j in 0..n_ms {
            for i in 0..n_ru {
                data.push(f(j, i));
            }
        }
        PairTable { n_ms, n_ru, data }
    }

    pub fn get(&self, j: usize, i: usize) -> &T {
        &self.data[j * self.n_ru + i]
    }

    pub fn get_mut(&mut self, j: usize, i: usize) -> &mut T {
        &mut self.data[j * self.n_ru + i]
    }

    /// Iterate in fixed (j, i) row-major order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &T)> {
        let n_ru = self.n_ru;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| ((k / n_ru, k % n_ru), v))
    }
}

/// Channel-model knobs that are not plain geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModelParams {
    /// Exponential azimuth correlation coefficient; entry (m, n) of the
    /// azimuth covariance is `az_corr^|m-n|`.
    pub az_corr: f64,
    /// Downtilt angle range (degrees) from which each pair's elevation
    /// steering angle is drawn once per long-term state.
    pub downtilt_deg: (f64, f64),
}

impl Default for ChannelModelParams {
    fn default() -> Self {
        ChannelModelParams { az_corr: 0.5, downtilt_deg: (70.0, 110.0) }
    }
}

/// Fixed network layout plus per-RU budgets.
///
/// Fronthaul budgets are stored in bits per downlink symbol, power budgets in
/// linear units; the optimizer converts to nats internally.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub n_ru: usize,
    pub n_ms: usize,
    /// Horizontal antennas per RU.
    pub n_az: Vec<usize>,
    /// Vertical antennas per RU.
    pub n_el: Vec<usize>,
    /// RU positions, meters, inside `[0, side]^2`.
    pub ru_pos: Vec<(f64, f64)>,
    /// MS positions, meters, inside `[0, side]^2`.
    pub ms_pos: Vec<(f64, f64)>,
    /// Square side length, meters.
    pub side: f64,
    /// Path-loss reference distance, meters.
    pub d0: f64,
    /// Path-loss exponent.
    pub eta: f64,
    /// Fronthaul capacity per RU, bits per symbol.
    pub fronthaul_bits: Vec<f64>,
    /// Transmit power budget per RU, linear.
    pub power: Vec<f64>,
    /// Coherence interval, symbols.
    pub coherence: usize,
    /// Master seed for all derived substreams.
    pub rng_seed: u64,
    pub model: ChannelModelParams,
}

/// Geometry-free parameters from which [`generate_topology`] draws positions.
#[derive(Debug, Clone)]
pub struct TopologyParams {
    pub n_ru: usize,
    pub n_ms: usize,
    pub n_az: usize,
    pub n_el: usize,
    pub side: f64,
    pub d0: f64,
    pub eta: f64,
    pub fronthaul_bits: f64,
    pub power: f64,
    pub coherence: usize,
    pub model: ChannelModelParams,
}

impl Topology {
    pub fn validate(&self) -> Result<()> {
        fn check(cond: bool, field: &str, msg: &str) -> Result<()> {
            if cond {
                Ok(())
            } else {
                Err(Error::config(field, msg))
            }
        }
        check(self.n_ru >= 1, "n_ru", "must be at least 1")?;
        check(self.n_ms >= 1, "n_ms", "must be at least 1")?;
        check(self.n_az.len() == self.n_ru, "n_az", "needs one entry per RU")?;
        check(self.n_el.len() == self.n_ru, "n_el", "needs one entry per RU")?;
        check(self.n_az.iter().all(|&n| n >= 1), "n_az", "antenna counts must be at least 1")?;
        check(self.n_el.iter().all(|&n| n >= 1), "n_el", "antenna counts must be at least 1")?;
        check(self.side > 0.0, "side", "must be positive")?;
        check(self.d0 > 0.0, "d0", "must be positive")?;
        check(self.eta > 0.0, "eta", "must be positive")?;
        check(self.fronthaul_bits.len() == self.n_ru, "fronthaul_bits", "needs one entry per RU")?;
        check(
            self.fronthaul_bits.iter().all(|&c| c >= 0.0 && c.is_finite()),
            "fronthaul_bits",
            "must be finite and nonnegative",
        )?;
        check(self.power.len() == self.n_ru, "power", "needs one entry per RU")?;
        check(
            self.power.iter().all(|&p| p > 0.0 && p.is_finite()),
            "power",
            "must be finite and positive",
        )?;
        check(self.coherence >= 1, "coherence", "must be at least 1")?;
        check(
            self.ru_pos.len() == self.n_ru && self.ms_pos.len() == self.n_ms,
            "positions",
            "position counts must match n_ru / n_ms",
        )?;
        let inside = |&(x, y): &(f64, f64)| {
            x >= 0.0 && y >= 0.0 && x <= self.side && y <= self.side
        };
        check(self.ru_pos.iter().all(inside), "ru_pos", "positions must lie inside the square")?;
        check(self.ms_pos.iter().all(inside), "ms_pos", "positions must lie inside the square")?;
        check(
            (0.0..1.0).contains(&self.model.az_corr),
            "az_corr",
            "must lie in [0, 1)",
        )?;
        Ok(())
    }

    pub fn distance(&self, j: usize, i: usize) -> f64 {
        let (mx, my) = self.ms_pos[j];
        let (rx, ry) = self.ru_pos[i];
        ((mx - rx).powi(2) + (my - ry).powi(2)).sqrt()
    }

    /// Flat key-value form, full fidelity (positions included).
    pub fn to_kv(&self) -> BTreeMap<String, String> {
        let mut kv = BTreeMap::new();
        let join_usize = |v: &[usize]| {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        let join_f64 = |v: &[f64]| {
            v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")
        };
        kv.insert("n_ru".into(), self.n_ru.to_string());
        kv.insert("n_ms".into(), self.n_ms.to_string());
        kv.insert("n_az".into(), join_usize(&self.n_az));
        kv.insert("n_el".into(), join_usize(&self.n_el));
        kv.insert("side".into(), format!("{}", self.side));
        kv.insert("d0".into(), format!("{}", self.d0));
        kv.insert("eta".into(), format!("{}", self.eta));
        kv.insert("fronthaul_bits".into(), join_f64(&self.fronthaul_bits));
        kv.insert("power".into(), join_f64(&self.power));
        kv.insert("coherence".into(), self.coherence.to_string());
        kv.insert("rng_seed".into(), self.rng_seed.to_string());
        kv.insert("az_corr".into(), format!("{}", self.model.az_corr));
        kv.insert("downtilt_deg".into(), {
            format!("{},{}", self.model.downtilt_deg.0, self.model.downtilt_deg.1)
        });
        for (i, (x, y)) in self.ru_pos.iter().enumerate() {
            kv.insert(format!("ru_pos_{i}"), format!("{x},{y}"));
        }
        for (j, (x, y)) in self.ms_pos.iter().enumerate() {
            kv.insert(format!("ms_pos_{j}"), format!("{x},{y}"));
        }
        kv
    }

    pub fn from_kv(kv: &BTreeMap<String, String>) -> Result<Topology> {
        fn get<'a>(kv: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str> {
            kv.get(key).map(|s| s.as_str()).ok_or_else(|| Error::config(key, "missing key"))
        }
        fn parse<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
            s.trim().parse().map_err(|_| Error::config(key, format!("cannot parse {s:?}")))
        }
        fn parse_list<T: std::str::FromStr>(key: &str, s: &str) -> Result<Vec<T>> {
            s.split(',').map(|p| parse(key, p)).collect()
        }
        fn parse_pair(key: &str, s: &str) -> Result<(f64, f64)> {
            let v: Vec<f64> = parse_list(key, s)?;
            if v.len() != 2 {
                return Err(Error::config(key, "expected two comma-separated values"));
            }
            Ok((v[0], v[1]))
        }
        let n_ru: usize = parse("n_ru", get(kv, "n_ru")?)?;
        let n_ms: usize = parse("n_ms", get(kv, "n_ms")?)?;
        let downtilt = parse_pair("downtilt_deg", get(kv, "downtilt_deg")?)?;
        let topo = Topology {
            n_ru,
            n_ms,
            n_az: parse_list("n_az", get(kv, "n_az")?)?,
            n_el: parse_list("n_el", get(kv, "n_el")?)?,
            side: parse("side", get(kv, "side")?)?,
            d0: parse("d0", get(kv, "d0")?)?,
            eta: parse("eta", get(kv, "eta")?)?,
            fronthaul_bits: parse_list("fronthaul_bits", get(kv, "fronthaul_bits")?)?,
            power: parse_list("power", get(kv, "power")?)?,
            coherence: parse("coherence", get(kv, "coherence")?)?,
            rng_seed: parse("rng_seed", get(kv, "rng_seed")?)?,
            model: ChannelModelParams {
                az_corr: parse("az_corr", get(kv, "az_corr")?)?,
                downtilt_deg: downtilt,
            },
            ru_pos: (0..n_ru)
                .map(|i| parse_pair(&format!("ru_pos_{i}"), get(kv, &format!("ru_pos_{i}"))?))
                .collect::<Result<_>>()?,
            ms_pos: (0..n_ms)
                .map(|j| parse_pair(&format!("ms_pos_{j}"), get(kv, &format!("ms_pos_{j}"))?))
                .collect::<Result<_>>()?,
        };
        topo.validate()?;
        Ok(topo)
    }
}

/// Draw RU and MS positions i.i.d. uniform in the square. Deterministic in
/// the seed; each position has its own substream so that adding nodes leaves
/// existing ones in place.
pub fn generate_topology(params: &TopologyParams, rng_seed: u64) -> Result<Topology> {
    let draw_pos = |label: &str, idx: usize| -> (f64, f64) {
        let mut rng = substream(rng_seed, label, &[idx as u64]);
        (rng.gen_range(0.0..params.side), rng.gen_range(0.0..params.side))
    };
    let topo = Topology {
        n_ru: params.n_ru,
        n_ms: params.n_ms,
        n_az: vec![params.n_az; params.n_ru],
        n_el: vec![params.n_el; params.n_ru],
        ru_pos: (0..params.n_ru).map(|i| draw_pos("ru-pos", i)).collect(),
        ms_pos: (0..params.n_ms).map(|j| draw_pos("ms-pos", j)).collect(),
        side: params.side,
        d0: params.d0,
        eta: params.eta,
        fronthaul_bits: vec![params.fronthaul_bits; params.n_ru],
        power: vec![params.power; params.n_ru],
        coherence: params.coherence,
        rng_seed,
        model: params.model.clone(),
    };
    topo.validate()?;
    Ok(topo)
}

/// Path-loss gain `1 / (1 + (d/d0)^eta)`, in (0, 1].
pub fn path_loss(d: f64, d0: f64, eta: f64) -> f64 {
    1.0 / (1.0 + (d / d0).powf(eta))
}

/// Everything about the channel that persists across coherence blocks.
#[derive(Debug, Clone)]
pub struct LongTermChannelState {
    /// Path gain per (MS, RU).
    pub alpha: PairTable<f64>,
    /// Unit-norm elevation direction per (MS, RU), dim `n_el[i]`.
    pub u_el: PairTable<CVec>,
    /// Azimuth covariance per (MS, RU), unit diagonal, dim `n_az[i]`.
    pub r_az: PairTable<CMat>,
    /// Cached Hermitian square roots of `r_az` used by block draws.
    r_az_sqrt: PairTable<CMat>,
}

/// One coherence block worth of azimuth fading.
///
/// Pass it around together with the [`LongTermChannelState`] it was drawn
/// from; elevation directions and path gains live there and never change
/// between blocks.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// Azimuth fading vector per (MS, RU), dim `n_az[i]`.
    pub h_az: PairTable<CVec>,
    pub block_index: u64,
}

/// Per-pair effective elevation gain: the factor multiplying
/// `|u_el' w_el|^2` in the received-power expression. Under the Kronecker
/// channel factorization this is exactly the path gain.
#[derive(Debug, Clone)]
pub struct EffectiveGainTable {
    pub lambda_el: PairTable<f64>,
}

impl EffectiveGainTable {
    pub fn from_state(state: &LongTermChannelState) -> Self {
        EffectiveGainTable {
            lambda_el: PairTable::from_fn(state.alpha.n_ms, state.alpha.n_ru, |j, i| {
                *state.alpha.get(j, i)
            }),
        }
    }
}

/// Exponential-correlation azimuth covariance: entry (m, n) = rho^|m-n|.
fn exp_corr(n: usize, rho: f64) -> CMat {
    CMat::from_fn(n, n, |m, k| {
        Complex64::new(rho.powi((m as i32 - k as i32).abs()), 0.0)
    })
}

/// Uniform-linear-array steering vector at electrical angle `theta`:
/// `(1/sqrt(n)) [1, e^{i pi cos(theta)}, ..., e^{i pi (n-1) cos(theta)}]`.
fn steering(n: usize, theta: f64) -> CVec {
    let s = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| Complex64::from_polar(s, std::f64::consts::PI * (k as f64) * theta.cos()))
        .collect()
}

/// Draw the long-term channel state for a topology: path gains from
/// geometry, one downtilt steering direction per pair, exponential azimuth
/// correlation. Deterministic in the topology's seed.
pub fn draw_long_term_state(topo: &Topology) -> Result<LongTermChannelState> {
    topo.validate()?;
    let (lo, hi) = topo.model.downtilt_deg;
    let alpha = PairTable::from_fn(topo.n_ms, topo.n_ru, |j, i| {
        path_loss(topo.distance(j, i), topo.d0, topo.eta)
    });
    let u_el = PairTable::from_fn(topo.n_ms, topo.n_ru, |j, i| {
        let mut rng = substream(topo.rng_seed, "downtilt", &[j as u64, i as u64]);
        let theta_deg = if (hi - lo).abs() < 1e-15 { lo } else { rng.gen_range(lo..hi) };
        steering(topo.n_el[i], theta_deg.to_radians())
    });
    let r_az =
        PairTable::from_fn(topo.n_ms, topo.n_ru, |_, i| exp_corr(topo.n_az[i], topo.model.az_corr));
    let r_az_sqrt = PairTable::from_fn(topo.n_ms, topo.n_ru, |j, i| {
        sqrt_psd(r_az.get(j, i)).expect("exponential correlation matrix is PSD")
    });
    Ok(LongTermChannelState { alpha, u_el, r_az, r_az_sqrt })
}

/// Standard circularly-symmetric complex Gaussian vector (unit variance per
/// entry).
fn cn_vector(rng: &mut impl Rng, n: usize) -> CVec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * s, im * s)
        })
        .collect()
}

/// Draw one coherence block of azimuth fading: `h_az = R_az^{1/2} g` with
/// `g ~ CN(0, I)`. Blocks and pairs use disjoint substreams derived from the
/// topology seed and `stream` label, so draws for distinct block indices are
/// independent and may run concurrently.
pub fn draw_block(
    topo: &Topology,
    state: &LongTermChannelState,
    stream: &str,
    block_index: u64,
) -> ChannelRealization {
    let h_az = PairTable::from_fn(topo.n_ms, topo.n_ru, |j, i| {
        let mut rng = substream(topo.rng_seed, stream, &[block_index, j as u64, i as u64]);
        let g = cn_vector(&mut rng, topo.n_az[i]);
        state.r_az_sqrt.get(j, i).mul_vec(&g)
    });
    ChannelRealization { h_az, block_index }
}

/// Assemble the full channel vector `sqrt(alpha) * h_az (x) u_el` of
/// dimension `n_az[i] * n_el[i]`. Used by the conventional baselines and by
/// cross-checks; the layered strategies never need it.
pub fn full_channel(
    state: &LongTermChannelState,
    realization: &ChannelRealization,
    j: usize,
    i: usize,
) -> Result<CVec> {
    if j >= state.alpha.n_ms || i >= state.alpha.n_ru {
        return Err(Error::domain(format!("full_channel: pair ({j},{i}) out of range")));
    }
    let a = state.alpha.get(j, i).sqrt();
    let h = kron_vec(realization.h_az.get(j, i), state.u_el.get(j, i));
    Ok(h.into_iter().map(|z| z * a).collect())
}

/// Mean received power factor `alpha * ||h_az||^2` shared by quantization
/// noise terms.
pub fn noise_gain(state: &LongTermChannelState, realization: &ChannelRealization, j: usize, i: usize) -> f64 {
    state.alpha.get(j, i) * vec_norm_sqr(realization.h_az.get(j, i))
}
