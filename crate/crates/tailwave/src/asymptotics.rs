//! Power-law tail extraction: local power index series, exponent
//! extrapolation, amplitude fits, and the comparison against the predicted
//! coefficient for each scenario.
//!
//! Targets are signed. The coefficient table (interior, scri, horizon,
//! nonzero-NP and higher-order laws) is keyed by [`Scenario`]; a sign flip
//! between the fitted amplitude and the target is a hard failure, not a
//! 200% deviation.

use crate::error::{Error, Result};
use crate::evolution::ScriColumn;
use crate::np_constants::NpReport;
use crate::numerics::{fit, interp};
use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    /// psi at constant r: -8 I0^(1) / tau^3.
    InteriorZeroNp,
    /// psi on gamma_alpha, normalised by (1 + u/v)/((u+1)^2 v): -4 I0^(1).
    FarfieldZeroNp,
    /// r psi at scri: -2 I0^(1) / u^2.
    ScriZeroNp,
    /// psi on a deep constant-r* curve, in v: -8 I0^(1) / v^3.
    HorizonZeroNp,
    /// T^k psi at constant r: 4 (-1)^k (k+1)! I0 / tau^(k+2).
    InteriorNonzeroNp { k: u32 },
    /// T^k (r psi) at scri: 2 (-1)^k k! I0 / u^(k+1).
    ScriTk { k: u32 },
    /// psi at constant r when I0 = I0^(1) = 0: 24 I0^(2) / tau^4.
    HigherOrder,
    /// v^2 d_v phi in B_alpha: constant 2 I0.
    NpScalar,
}

fn factorial(k: u32) -> Real {
    (1..=k as u64).product::<u64>() as Real
}

impl Scenario {
    pub fn name(&self) -> String {
        match self {
            Scenario::InteriorZeroNp => "interior_zero_np".into(),
            Scenario::FarfieldZeroNp => "farfield_zero_np".into(),
            Scenario::ScriZeroNp => "scri_zero_np".into(),
            Scenario::HorizonZeroNp => "horizon_zero_np".into(),
            Scenario::InteriorNonzeroNp { k } => format!("interior_nonzero_np_k{k}"),
            Scenario::ScriTk { k } => format!("scri_tk_k{k}"),
            Scenario::HigherOrder => "higher_order".into(),
            Scenario::NpScalar => "np_scalar".into(),
        }
    }

    pub fn parse(name: &str) -> Option<Scenario> {
        match name {
            "interior_zero_np" => Some(Scenario::InteriorZeroNp),
            "farfield_zero_np" => Some(Scenario::FarfieldZeroNp),
            "scri_zero_np" => Some(Scenario::ScriZeroNp),
            "horizon_zero_np" => Some(Scenario::HorizonZeroNp),
            "higher_order" => Some(Scenario::HigherOrder),
            "np_scalar" => Some(Scenario::NpScalar),
            _ => {
                if let Some(rest) = name.strip_prefix("interior_nonzero_np_k") {
                    rest.parse().ok().map(|k| Scenario::InteriorNonzeroNp { k })
                } else if let Some(rest) = name.strip_prefix("scri_tk_k") {
                    rest.parse().ok().map(|k| Scenario::ScriTk { k })
                } else {
                    None
                }
            }
        }
    }

    /// Predicted decay exponent of the fitted series.
    pub fn theory_exponent(&self) -> Real {
        match self {
            Scenario::InteriorZeroNp => 3.0,
            Scenario::FarfieldZeroNp => 0.0,
            Scenario::ScriZeroNp => 2.0,
            Scenario::HorizonZeroNp => 3.0,
            Scenario::InteriorNonzeroNp { k } => (*k + 2) as Real,
            Scenario::ScriTk { k } => (*k + 1) as Real,
            Scenario::HigherOrder => 4.0,
            Scenario::NpScalar => 0.0,
        }
    }

    /// Signed amplitude target from the NP report.
    pub fn target(&self, np: &NpReport) -> Result<Real> {
        let missing = |what: &str| Error::MissingConstant(self.name(), what.into());
        let i0 = || np.i0.map(|v| v.value).ok_or_else(|| missing("I0"));
        let inv = |k: u32| {
            np.get_inverted(k)
                .map(|e| e.value)
                .ok_or_else(|| missing(&format!("I0^({k})")))
        };
        Ok(match self {
            Scenario::InteriorZeroNp => -8.0 * inv(1)?,
            Scenario::FarfieldZeroNp => -4.0 * inv(1)?,
            Scenario::ScriZeroNp => -2.0 * inv(1)?,
            Scenario::HorizonZeroNp => -8.0 * inv(1)?,
            Scenario::InteriorNonzeroNp { k } => {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                4.0 * sign * factorial(k + 1) * i0()?
            }
            Scenario::ScriTk { k } => {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                2.0 * sign * factorial(*k) * i0()?
            }
            Scenario::HigherOrder => 24.0 * inv(2)?,
            Scenario::NpScalar => 2.0 * i0()?,
        })
    }
}

/// Completed fit of one series against one scenario.
#[derive(Clone, Debug)]
pub struct TailFit {
    pub curve: String,
    pub field: String,
    pub scenario: Option<String>,
    pub window: (Real, Real),
    /// Decimated local power index series (tau, p).
    pub p_series: Vec<(Real, Real)>,
    pub p_inf: Real,
    pub p_err: Real,
    pub amplitude: Real,
    pub amp_err: Real,
    pub exponent_theory: Real,
    pub target: Option<Real>,
    /// |A - target| / |target|, or |A| when the target is zero.
    pub deviation: Option<Real>,
}

/// Local power index p(tau) = -d ln|y| / d ln tau on a log-spaced
/// resampling of the series. The series must have uniform sign.
pub fn local_power_index(tau: &[Real], y: &[Real]) -> Result<Vec<(Real, Real)>> {
    assert!(tau.len() == y.len() && tau.len() >= 4);
    for i in 1..y.len() {
        if y[i] * y[i - 1] < 0.0 {
            return Err(Error::SignChangeInWindow(tau[i]));
        }
    }
    // interpolate ln|y| against ln tau: exact for pure power laws
    let mut lnt_data = Vec::with_capacity(tau.len());
    let mut lny_data = Vec::with_capacity(tau.len());
    for (&t, &yy) in tau.iter().zip(y) {
        if yy != 0.0 && t > 0.0 {
            lnt_data.push(t.ln());
            lny_data.push(yy.abs().ln());
        }
    }
    if lnt_data.len() < 4 {
        return Ok(vec![]);
    }
    let lo = lnt_data[0];
    let hi = lnt_data[lnt_data.len() - 1];
    let decades = (hi - lo) / std::f64::consts::LN_10;
    let n = ((decades * 60.0).ceil() as usize).clamp(8, 4000);
    let step = (hi - lo) / n as Real;
    let mut lnt = Vec::with_capacity(n + 1);
    let mut lny = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = lo + step * k as Real;
        lnt.push(t);
        lny.push(interp::cubic(&lnt_data, &lny_data, t.min(hi)));
    }
    let mut out = Vec::new();
    for k in 1..lnt.len().saturating_sub(1) {
        let p = -(lny[k + 1] - lny[k - 1]) / (lnt[k + 1] - lnt[k - 1]);
        out.push((lnt[k].exp(), p));
    }
    Ok(out)
}

/// Window selection: start after the last sign change (ringing) and stop
/// where the signal falls under 10x the floor noise.
pub fn auto_window(tau: &[Real], y: &[Real], default_lo: Real, default_hi: Real) -> (Real, Real) {
    let y_max = y.iter().fold(0.0 as Real, |a, &b| a.max(b.abs()));
    let floor = 1e-13 * y_max;
    let mut last_flip: Option<Real> = None;
    for i in 1..y.len() {
        if y[i] * y[i - 1] < 0.0 && y[i].abs() > floor {
            last_flip = Some(tau[i]);
        }
    }
    let mut lo = default_lo;
    if let Some(f) = last_flip {
        lo = lo.max(1.3 * f);
    }
    let mut hi = default_hi.min(tau[tau.len() - 1]);
    for i in (0..y.len()).rev() {
        if y[i].abs() > 10.0 * floor {
            hi = hi.min(tau[i]);
            break;
        }
    }
    (lo, hi)
}

fn windowed(tau: &[Real], y: &[Real], lo: Real, hi: Real) -> (Vec<Real>, Vec<Real>) {
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for (&t, &yy) in tau.iter().zip(y) {
        if t >= lo && t <= hi && t.is_finite() && yy.is_finite() {
            ts.push(t);
            ys.push(yy);
        }
    }
    (ts, ys)
}

/// Fit a series against a scenario: exponent by 1/tau extrapolation of the
/// local index, amplitude by fitting y tau^(p_theory) = A + B/tau over the
/// last half-decade of the window, deviation against the signed target.
pub fn extrapolate_and_compare(
    tau: &[Real],
    y: &[Real],
    np: &NpReport,
    scenario: Scenario,
    default_window: (Real, Real),
    curve: &str,
    field: &str,
) -> Result<TailFit> {
    let target = scenario.target(np)?;
    let mut tf = fit_series(
        tau,
        y,
        scenario.theory_exponent(),
        default_window,
        curve,
        field,
    )?;
    tf.scenario = Some(scenario.name());
    tf.target = Some(target);
    tf.deviation = Some(if target == 0.0 {
        tf.amplitude.abs()
    } else {
        (tf.amplitude - target).abs() / target.abs()
    });
    Ok(tf)
}

/// Scenario-free fit (exponent and amplitude at a prescribed theory
/// exponent).
pub fn fit_series(
    tau: &[Real],
    y: &[Real],
    exponent_theory: Real,
    default_window: (Real, Real),
    curve: &str,
    field: &str,
) -> Result<TailFit> {
    let (lo, hi) = auto_window(tau, y, default_window.0, default_window.1);
    if hi * (1.0 + 1e-12) < 10.0 * lo && exponent_theory != 0.0 {
        return Err(Error::WindowTooShort { lo, hi });
    }
    let (ts, ys) = windowed(tau, y, lo, hi);
    if ts.len() < 8 {
        return Err(Error::WindowTooShort { lo, hi });
    }
    let p_series = if exponent_theory != 0.0 {
        local_power_index(&ts, &ys)?
    } else {
        local_power_index(&ts, &ys).unwrap_or_default()
    };
    let (p_inf, p_err) = if p_series.len() >= 4 {
        let xs: Vec<Real> = p_series.iter().map(|(t, _)| 1.0 / t).collect();
        let ps: Vec<Real> = p_series.iter().map(|(_, p)| *p).collect();
        let (a, _, se) = fit::line(&xs, &ps);
        (a, se)
    } else {
        (exponent_theory, Real::NAN)
    };
    // amplitude over the last half-decade of the window
    let amp_lo = hi / 10f64.sqrt();
    let (ta, ya) = windowed(tau, y, amp_lo, hi);
    if ta.len() < 4 {
        return Err(Error::WindowTooShort { lo: amp_lo, hi });
    }
    let xs: Vec<Real> = ta.iter().map(|t| 1.0 / t).collect();
    let zs: Vec<Real> = ta
        .iter()
        .zip(&ya)
        .map(|(&t, &yy)| yy * t.powf(exponent_theory))
        .collect();
    let (amp, _, amp_se) = fit::line(&xs, &zs);
    // decimate the stored index series to keep reports small
    let stride = (p_series.len() / 60).max(1);
    let p_dec: Vec<(Real, Real)> = p_series.iter().step_by(stride).cloned().collect();
    Ok(TailFit {
        curve: curve.into(),
        field: field.into(),
        scenario: None,
        window: (lo, hi),
        p_series: p_dec,
        p_inf,
        p_err,
        amplitude: amp,
        amp_err: amp_se,
        exponent_theory,
        target: None,
        deviation: None,
    })
}

/// Radiation field at scri by polynomial extrapolation in 1/v across the
/// retained columns (columns must share their tau sampling).
pub fn scri_series(columns: &[ScriColumn]) -> Result<(Vec<Real>, Vec<Real>)> {
    if columns.len() < 2 {
        return Err(Error::ColumnNotRetained);
    }
    let mut cols: Vec<&ScriColumn> = columns.iter().collect();
    cols.sort_by(|a, b| a.v.partial_cmp(&b.v).unwrap());
    let n = cols[0].tau.len();
    for c in &cols {
        if c.tau.len() != n {
            return Err(Error::GridMismatch(
                "scri columns have unequal sampling".into(),
            ));
        }
    }
    // x = 1/v, descending with the largest v (smallest x) last
    let xs: Vec<Real> = cols.iter().map(|c| 1.0 / c.v).collect();
    let mut tau = Vec::with_capacity(n);
    let mut phi_inf = Vec::with_capacity(n);
    for i in 0..n {
        let ys: Vec<Real> = cols.iter().map(|c| c.phi[i]).collect();
        let (val, _) = fit::limit_at_zero(&xs, &ys, 3);
        tau.push(cols[0].tau[i]);
        phi_inf.push(val);
    }
    Ok((tau, phi_inf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::np_constants::{NpEntry, NpMethod, ValueWithError};

    fn report_with(i0: Real, i1: Real, i2: Real) -> NpReport {
        NpReport {
            i0: Some(ValueWithError::new(i0, 1e-14)),
            c0: None,
            inverted: vec![
                NpEntry {
                    k: 1,
                    value: i1,
                    error: 1e-14,
                    method: NpMethod::Both,
                    agreement: Some(0.0),
                },
                NpEntry {
                    k: 2,
                    value: i2,
                    error: 1e-12,
                    method: NpMethod::Both,
                    agreement: Some(0.0),
                },
            ],
            notes: vec![],
        }
    }

    fn synth(f: impl Fn(Real) -> Real, lo: Real, hi: Real, n: usize) -> (Vec<Real>, Vec<Real>) {
        let mut tau = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            let t = lo + (hi - lo) * i as Real / (n - 1) as Real;
            tau.push(t);
            y.push(f(t));
        }
        (tau, y)
    }

    #[test]
    fn exact_power_law_has_constant_index() {
        let (tau, y) = synth(|t| t.powf(-3.0), 10.0, 1000.0, 4000);
        let p = local_power_index(&tau, &y).unwrap();
        for &(t, pv) in &p {
            assert!((pv - 3.0).abs() < 1e-6, "t = {t}, p = {pv}");
        }
    }

    #[test]
    fn subleading_correction_extrapolates_to_three() {
        let (tau, y) = synth(|t| t.powf(-3.0) * (1.0 + 5.0 / t), 10.0, 1000.0, 6000);
        let p = local_power_index(&tau, &y).unwrap();
        let xs: Vec<Real> = p.iter().map(|(t, _)| 1.0 / t).collect();
        let ps: Vec<Real> = p.iter().map(|(_, pv)| *pv).collect();
        let (intercept, _, _) = fit::line(&xs, &ps);
        assert!((intercept - 3.0).abs() < 0.01, "intercept = {intercept}");
    }

    #[test]
    fn exponential_is_flagged_non_power_law() {
        // p(tau) = tau for e^-tau: grows without bound instead of settling
        let (tau, y) = synth(|t| (-t).exp(), 5.0, 30.0, 2000);
        let p = local_power_index(&tau, &y).unwrap();
        let first = p[1].1;
        let last = p[p.len() - 2].1;
        assert!(last > first + 10.0, "p grows: {first} -> {last}");
        // and tracks tau itself
        let (t_mid, p_mid) = p[p.len() / 2];
        assert!((p_mid - t_mid).abs() < 0.05 * t_mid);
    }

    #[test]
    fn sign_change_is_an_error() {
        let (tau, y) = synth(|t| (t - 50.0) * t.powf(-3.0), 10.0, 1000.0, 500);
        assert!(matches!(
            local_power_index(&tau, &y),
            Err(Error::SignChangeInWindow(_))
        ));
    }

    #[test]
    fn synthetic_interior_tail_matches_target_exactly() {
        let q = 0.7;
        let np = report_with(0.0, q, 0.0);
        let (tau, y) = synth(|t| -8.0 * q / t.powi(3), 50.0, 2000.0, 8000);
        let tf = extrapolate_and_compare(
            &tau,
            &y,
            &np,
            Scenario::InteriorZeroNp,
            (100.0, 1500.0),
            "r=10",
            "psi",
        )
        .unwrap();
        assert!((tf.p_inf - 3.0).abs() < 1e-3);
        assert!(tf.deviation.unwrap() < 1e-9, "dev = {:?}", tf.deviation);
    }

    #[test]
    fn synthetic_tail_with_subleading_term_within_one_percent() {
        let q = 0.7;
        let np = report_with(0.0, q, 0.0);
        let (tau, y) = synth(|t| (-8.0 * q + 30.0 * q / t) / t.powi(3), 50.0, 1000.0, 8000);
        let tf = extrapolate_and_compare(
            &tau,
            &y,
            &np,
            Scenario::InteriorZeroNp,
            (100.0, 1000.0),
            "r=10",
            "psi",
        )
        .unwrap();
        assert!(tf.deviation.unwrap() <= 0.01, "dev = {:?}", tf.deviation);
    }

    #[test]
    fn missing_constant_is_reported() {
        let np = NpReport::default();
        let (tau, y) = synth(|t| t.powf(-3.0), 10.0, 1000.0, 500);
        assert!(matches!(
            extrapolate_and_compare(
                &tau,
                &y,
                &np,
                Scenario::InteriorZeroNp,
                (20.0, 900.0),
                "c",
                "psi"
            ),
            Err(Error::MissingConstant(_, _))
        ));
    }

    #[test]
    fn nonzero_np_targets_have_correct_signs_and_factorials() {
        let np = report_with(1.0, 0.0, 0.0);
        assert_eq!(
            Scenario::InteriorNonzeroNp { k: 0 }.target(&np).unwrap(),
            4.0
        );
        assert_eq!(
            Scenario::InteriorNonzeroNp { k: 1 }.target(&np).unwrap(),
            -8.0
        );
        assert_eq!(
            Scenario::InteriorNonzeroNp { k: 2 }.target(&np).unwrap(),
            24.0
        );
        assert_eq!(Scenario::ScriTk { k: 0 }.target(&np).unwrap(), 2.0);
        assert_eq!(Scenario::ScriTk { k: 1 }.target(&np).unwrap(), -2.0);
        assert_eq!(Scenario::NpScalar.target(&np).unwrap(), 2.0);
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in [
            Scenario::InteriorZeroNp,
            Scenario::FarfieldZeroNp,
            Scenario::ScriZeroNp,
            Scenario::HorizonZeroNp,
            Scenario::InteriorNonzeroNp { k: 1 },
            Scenario::ScriTk { k: 2 },
            Scenario::HigherOrder,
            Scenario::NpScalar,
        ] {
            assert_eq!(Scenario::parse(&s.name()), Some(s));
        }
    }
}
