use std::str::FromStr;

/// An information level in bits, or a percentage of a reference quantity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Level {
    Bits(f64),
    Percent(f64),
}

impl Level {
    pub fn resolve(self, reference: f64) -> f64 {
        match self {
            Level::Bits(b) => b,
            Level::Percent(p) => p / 100.0 * reference,
        }
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (body, percent) = match s.strip_suffix('%') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let v: f64 = body
            .trim()
            .parse()
            .map_err(|_| format!("not a number: {s:?}"))?;
        if !v.is_finite() {
            return Err(format!("not finite: {s:?}"));
        }
        Ok(if percent {
            Level::Percent(v)
        } else {
            Level::Bits(v)
        })
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Level::Bits(b) => write!(f, "{b}"),
            Level::Percent(p) => write!(f, "{p}%"),
        }
    }
}

/// `start:stop:count` (inclusive, evenly spaced) or a comma-separated list.
#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    Range {
        start: Level,
        stop: Level,
        count: usize,
    },
    List(Vec<Level>),
}

impl Grid {
    pub fn resolve(&self, reference: f64) -> Vec<f64> {
        match self {
            Grid::List(levels) => levels.iter().map(|l| l.resolve(reference)).collect(),
            Grid::Range { start, stop, count } => {
                let (a, b) = (start.resolve(reference), stop.resolve(reference));
                if *count == 1 {
                    return vec![a];
                }
                let last = count - 1;
                (0..*count)
                    .map(|k| {
                        if k == last {
                            b
                        } else {
                            a + (b - a) * k as f64 / last as f64
                        }
                    })
                    .collect()
            }
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [start, stop, count] => {
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad point count {count:?}"))?;
                if count == 0 {
                    return Err("grid needs at least one point".into());
                }
                Ok(Grid::Range {
                    start: start.parse()?,
                    stop: stop.parse()?,
                    count,
                })
            }
            [list] => {
                let levels = list
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<Level>, _>>()?;
                Ok(Grid::List(levels))
            }
            _ => Err(format!("expected start:stop:count or a list, got {s:?}")),
        }
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Grid::Range { start, stop, count } => write!(f, "{start}:{stop}:{count}"),
            Grid::List(levels) => {
                let items: Vec<String> = levels.iter().map(Level::to_string).collect();
                write!(f, "{}", items.join(","))
            }
        }
    }
}
