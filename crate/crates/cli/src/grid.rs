//! Parameter grids: `start:stop:step` ranges, comma lists, or single values.

/// Rounds to 12 decimals so that `0.1:1.9:0.1` produces exactly `1.0`.
fn snap(x: f64) -> f64 {
    format!("{x:.12}").parse().expect("formatted float parses")
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

/// Parses `start:stop:step` (inclusive of `stop` within half a step), a
/// comma-separated list, or a single number.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must be start:stop:step, got {s:?}"));
        }
        let (start, stop, step) = (number(parts[0])?, number(parts[1])?, number(parts[2])?);
        if !(step > 0.0) {
            return Err(format!("grid step must be positive, got {step}"));
        }
        if stop < start {
            return Err(format!("grid stop {stop} is below start {start}"));
        }
        // A point exactly half a step past `stop` is excluded.
        let count = ((stop - start) / step + 0.5 - 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(format!("grid has {count} points; refusing more than 1e6"));
        }
        return Ok((0..count).map(|k| snap(start + k as f64 * step)).collect());
    }
    let values: Vec<f64> = s.split(',').map(number).collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err("empty grid".into());
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_include_endpoint() {
        let g = parse_grid("0.1:1.9:0.1").unwrap();
        assert_eq!(g.len(), 19);
        assert_eq!(g[9], 1.0);
        assert_eq!(*g.last().unwrap(), 1.9);
        assert_eq!(parse_grid("0.05:0.5:0.05").unwrap().len(), 10);
        // Within half a step of the endpoint counts as reaching it.
        assert_eq!(parse_grid("0:1:0.3").unwrap(), vec![0.0, 0.3, 0.6, 0.9]);
        assert_eq!(parse_grid("0:1:0.4").unwrap(), vec![0.0, 0.4, 0.8]);
    }

    #[test]
    fn lists_and_errors() {
        assert_eq!(parse_grid("0.5, 1,1.5").unwrap(), vec![0.5, 1.0, 1.5]);
        assert_eq!(parse_grid("0.7").unwrap(), vec![0.7]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("nan").is_err());
    }
}
