/// Central difference at interior points of a uniformly spaced series;
/// `None` at both ends.
pub fn central_difference(values: &[f64], spacing: f64) -> Vec<Option<f64>> {
    (0..values.len())
        .map(|i| {
            (i > 0 && i + 1 < values.len()).then(|| (values[i + 1] - values[i - 1]) / (2.0 * spacing))
        })
        .collect()
}

/// Abscissas where the series changes sign, by linear interpolation between
/// the bracketing samples. Samples that are exactly zero count once.
pub fn find_zero_crossing(series: &[(f64, f64)]) -> Vec<f64> {
    let mut out = Vec::new();
    for (i, w) in series.windows(2).enumerate() {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if !(y0.is_finite() && y1.is_finite()) {
            continue;
        }
        if y0 == 0.0 {
            let prev_zero = i > 0 && series[i - 1].1 == 0.0;
            if !prev_zero {
                out.push(x0);
            }
        } else if y0 * y1 < 0.0 {
            out.push(x0 - y0 * (x1 - x0) / (y1 - y0));
        }
    }
    if let Some(&(x, y)) = series.last() {
        if y == 0.0 && series.len() > 1 && series[series.len() - 2].1 != 0.0 {
            out.push(x);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Maximum,
    Minimum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub theta: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Interior local extrema by neighbour comparison. Runs of equal values are
/// collapsed first and an extremal plateau is reported at its midpoint.
pub fn find_extrema(series: &[(f64, f64)]) -> Vec<Extremum> {
    // (first index, last index, value) of each run of equal values
    let mut runs: Vec<(usize, usize, f64)> = Vec::new();
    for (i, &(_, y)) in series.iter().enumerate() {
        match runs.last_mut() {
            Some(run) if run.2 == y => run.1 = i,
            _ => runs.push((i, i, y)),
        }
    }
    runs.windows(3)
        .filter_map(|w| {
            let (prev, (first, last, y), next) = (w[0].2, w[1], w[2].2);
            let kind = if y > prev && y > next {
                ExtremumKind::Maximum
            } else if y < prev && y < next {
                ExtremumKind::Minimum
            } else {
                return None;
            };
            let theta = 0.5 * (series[first].0 + series[last].0);
            Some(Extremum { theta, value: y, kind })
        })
        .collect()
}
