//! Angles given as radians or as rational multiples of π (`pi/6`, `3pi/8`, `-2*pi/3`, `π`).

use std::f64::consts::PI;

pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s = text.trim().to_ascii_lowercase().replace('π', "pi");
    let bad = || format!("malformed angle {text:?}");
    let Some(at) = s.find("pi") else {
        return s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    };
    let coef = s[..at].trim().trim_end_matches('*').trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = s[at + 2..].trim();
    let den = match rest.strip_prefix('/') {
        None if rest.is_empty() => 1.0,
        None => return Err(bad()),
        Some(d) => d.trim().parse::<f64>().map_err(|_| bad())?,
    };
    if den == 0.0 || !den.is_finite() {
        return Err(bad());
    }
    Ok(nearest_constant(coef, den).unwrap_or(coef * PI / den))
}

/// `±π/d` for the denominators the standard library rounds correctly.
fn nearest_constant(coef: f64, den: f64) -> Option<f64> {
    use std::f64::consts::*;
    let base = [(1.0, PI), (2.0, FRAC_PI_2), (3.0, FRAC_PI_3), (4.0, FRAC_PI_4), (6.0, FRAC_PI_6), (8.0, FRAC_PI_8)]
        .iter()
        .find(|(d, _)| *d == den)?
        .1;
    (coef.abs() == 1.0).then_some(coef * base)
}

/// Comma-separated list of angles.
pub fn parse_angles(text: &str) -> Result<Vec<f64>, String> {
    let out: Vec<f64> = text.split(',').filter(|s| !s.trim().is_empty()).map(parse_angle).collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err(format!("empty angle list {text:?}"));
    }
    Ok(out)
}

/// `start:stop:step` or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return parse_angles(text);
    }
    let bad = || format!("malformed range {text:?}");
    let nums: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 || stop < start || !step.is_finite() {
        return Err(bad());
    }
    let steps = ((stop - start) / step).round() as usize;
    if steps > 1_000_000 {
        return Err(bad());
    }
    if steps == 0 {
        return Ok(vec![start]);
    }
    Ok((0..=steps).map(|i| start + (stop - start) * i as f64 / steps as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8};

    #[test]
    fn pi_fractions_are_exact() {
        assert_eq!(parse_angle("pi/6").unwrap(), FRAC_PI_6);
        assert_eq!(parse_angle("pi/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse_angle("pi/3").unwrap(), FRAC_PI_3);
        assert_eq!(parse_angle(" PI/8 ").unwrap(), FRAC_PI_8);
        assert_eq!(parse_angle("π").unwrap(), PI);
        assert_eq!(parse_angle("pi/2").unwrap(), std::f64::consts::FRAC_PI_2);
        assert_eq!(parse_angle("-pi/4").unwrap(), -FRAC_PI_4);
        assert_eq!(parse_angle("3pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_angle("2*pi/3").unwrap(), 2.0 * PI / 3.0);
    }

    #[test]
    fn radians_and_errors() {
        assert_eq!(parse_angle("0.75").unwrap(), 0.75);
        for bad in ["", "pi/0", "pix", "two pi", "nan", "pi/"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grids() {
        let g = parse_grid("0:1:0.1").unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], 0.3);
        assert_eq!(parse_grid("0,0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.2:0.2:0.1").unwrap(), vec![0.2]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }
}
