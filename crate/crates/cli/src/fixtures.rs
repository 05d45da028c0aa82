//! Named schemes: built-in fixtures and `*.fixture` files.

use std::path::Path;

use detres_core::det::{BuildMode, DegreeMatrix, DetScheme};
use detres_core::{Field, Poly};
use serde::Serialize;

use crate::config::Config;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Linear {
        t: usize,
        c: usize,
        n: usize,
    },
    /// Generic entries of the given degrees.
    Degrees {
        n: usize,
        grid: Vec<Vec<i32>>,
    },
    /// Explicit entries in `x0..xn`.
    Entries {
        n: usize,
        rows: Vec<Vec<String>>,
    },
}

/// Outcomes a fixture is known to have; checked by `verify`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Expectations {
    /// Whether `max n_2 < 2 min n_1` holds for the minimal resolution of `I`.
    pub gate: Option<bool>,
    /// Whether degree-0 endomorphisms of `I/I^2` are scalars.
    pub simple: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fixture {
    pub name: String,
    pub shape: Shape,
    pub expect: Expectations,
    pub description: String,
}

fn grid(rows: &[&[i32]]) -> Vec<Vec<i32>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

fn degrees(
    name: &str,
    n: usize,
    g: Vec<Vec<i32>>,
    gate: bool,
    simple: Option<bool>,
    description: &str,
) -> Fixture {
    Fixture {
        name: name.into(),
        shape: Shape::Degrees { n, grid: g },
        expect: Expectations {
            gate: Some(gate),
            simple,
        },
        description: description.into(),
    }
}

fn entries(name: &str, n: usize, rows: &[&[&str]], description: &str) -> Fixture {
    Fixture {
        name: name.into(),
        shape: Shape::Entries {
            n,
            rows: rows
                .iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect())
                .collect(),
        },
        expect: Expectations {
            gate: Some(true),
            simple: None,
        },
        description: description.into(),
    }
}

pub fn builtin() -> Vec<Fixture> {
    vec![
        entries(
            "twisted-cubic",
            3,
            &[&["x0", "x1", "x2"], &["x1", "x2", "x3"]],
            "rational normal curve of degree 3 in P^3",
        ),
        entries(
            "scroll-s21",
            4,
            &[&["x0", "x1", "x3"], &["x1", "x2", "x4"]],
            "rational normal scroll S(2,1) in P^4: catalecticant blocks of widths 2 and 1",
        ),
        Fixture {
            name: "p4-linear-curve".into(),
            shape: Shape::Linear { t: 2, c: 3, n: 4 },
            expect: Expectations {
                gate: Some(true),
                simple: None,
            },
            description: "generic linear 2x4 matrix in P^4".into(),
        },
        degrees(
            "p3-curve-112",
            3,
            grid(&[&[1, 1, 2], &[1, 1, 2]]),
            false,
            Some(false),
            "curve in P^3 with resolution 0 -> R(-4)^2 -> R(-3)^2 + R(-2); the degree-0 endomorphisms of I/I^2 exceed the scalars",
        ),
        degrees("p3-curve-122", 3, grid(&[&[1, 2, 2], &[1, 2, 2]]), true, Some(true), "curve in P^3"),
        degrees("p3-curve-222", 3, grid(&[&[2, 2, 2], &[2, 2, 2]]), true, Some(true), "curve in P^3"),
        degrees("p3-curve-322", 3, grid(&[&[3, 2, 2], &[3, 2, 2]]), true, Some(true), "curve in P^3"),
        degrees("p3-curve-331", 3, grid(&[&[3, 3, 1], &[3, 3, 1]]), true, Some(true), "curve in P^3"),
        degrees("p4-curve-1222", 4, grid(&[&[1, 2, 2, 2], &[1, 2, 2, 2]]), false, None, "curve in P^4"),
        degrees("p4-curve-2222", 4, grid(&[&[2, 2, 2, 2], &[2, 2, 2, 2]]), true, Some(true), "curve in P^4"),
    ]
}

fn parse_grid(text: &str) -> Result<Vec<Vec<i32>>, CliError> {
    text.split(';')
        .enumerate()
        .map(|(i, row)| {
            row.split([',', ' '])
                .filter(|s| !s.is_empty())
                .enumerate()
                .map(|(j, s)| {
                    s.parse::<i32>().map_err(|_| {
                        CliError::Usage(format!(
                            "degree grid: row {i}, column {j}: `{s}` is not an integer"
                        ))
                    })
                })
                .collect()
        })
        .collect()
}

fn parse_entries(text: &str) -> Vec<Vec<String>> {
    text.split(';')
        .map(|row| row.split(',').map(|s| s.trim().to_string()).collect())
        .collect()
}

/// A fixture from a `key = value` file with keys `name`, `n`, one of
/// `degrees`/`entries`/`linear`, and optionally `expect_gate`, `expect_simple`,
/// `description`.
pub fn parse_fixture_file(text: &str, origin: &str) -> Result<Fixture, CliError> {
    let mut kv = std::collections::BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("{origin}:{}: expected `key = value`", k + 1))
        })?;
        kv.insert(key.trim().to_string(), value.trim().to_string());
    }
    let get = |k: &str| kv.get(k).map(String::as_str);
    let name = get("name").ok_or_else(|| CliError::Usage(format!("{origin}: missing `name`")))?;
    let n = || -> Result<usize, CliError> {
        get("n")
            .ok_or_else(|| CliError::Usage(format!("{origin}: missing `n`")))?
            .parse()
            .map_err(|_| CliError::Usage(format!("{origin}: `n` must be an integer")))
    };
    let shape = if let Some(e) = get("entries") {
        Shape::Entries {
            n: n()?,
            rows: parse_entries(e),
        }
    } else if let Some(g) = get("degrees") {
        Shape::Degrees {
            n: n()?,
            grid: parse_grid(g)?,
        }
    } else if let Some(l) = get("linear") {
        let v = crate::config::parse_list("linear", l)?;
        match v[..] {
            [t, c, n] => Shape::Linear {
                t: t as usize,
                c: c as usize,
                n: n as usize,
            },
            _ => return Err(CliError::Usage(format!("{origin}: `linear` needs t,c,n"))),
        }
    } else {
        return Err(CliError::Usage(format!(
            "{origin}: needs one of `entries`, `degrees`, `linear`"
        )));
    };
    let boolean = |k: &str| -> Result<Option<bool>, CliError> {
        get(k)
            .map(|v| {
                v.parse::<bool>()
                    .map_err(|_| CliError::Usage(format!("{origin}: `{k}` must be true or false")))
            })
            .transpose()
    };
    Ok(Fixture {
        name: name.to_string(),
        shape,
        expect: Expectations {
            gate: boolean("expect_gate")?,
            simple: boolean("expect_simple")?,
        },
        description: get("description").unwrap_or("").to_string(),
    })
}

/// Built-in fixtures followed by every `*.fixture` file in `dir`.
pub fn catalog(dir: Option<&Path>) -> Result<Vec<Fixture>, CliError> {
    let mut out = builtin();
    if let Some(dir) = dir {
        let rd =
            std::fs::read_dir(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        let mut paths: Vec<_> = rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "fixture"))
            .collect();
        paths.sort();
        for p in paths {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let f = parse_fixture_file(&text, &p.display().to_string())?;
            out.retain(|x| x.name != f.name);
            out.push(f);
        }
    }
    Ok(out)
}

/// The fixture selected by `fixture`, or an ad hoc one from `linear`,
/// `degrees` or `entries` with `n`.
pub fn select(cfg: &Config) -> Result<Fixture, CliError> {
    let dir = cfg.get("fixtures_dir").map(Path::new);
    if let Some(name) = cfg.get("fixture") {
        return catalog(dir)?
            .into_iter()
            .find(|f| f.name == name)
            .ok_or_else(|| CliError::Usage(format!("unknown fixture `{name}`")));
    }
    let mut text = String::from("name = custom\n");
    for key in ["linear", "degrees", "entries", "n"] {
        if let Some(v) = cfg.get(key) {
            text.push_str(&format!("{key} = {v}\n"));
        }
    }
    parse_fixture_file(&text, "command line")
}

impl Fixture {
    pub fn scheme<F: Field>(&self, field: &F, seed: u64) -> Result<DetScheme<F>, CliError> {
        match &self.shape {
            Shape::Linear { t, c, n } => Ok(DetScheme::generic(
                field,
                DegreeMatrix::linear(*t, *c, *n)?,
                seed,
            )?),
            Shape::Degrees { n, grid } => Ok(DetScheme::generic(
                field,
                DegreeMatrix::from_entry_degrees(*n, grid)?,
                seed,
            )?),
            Shape::Entries { n, rows } => explicit(field, *n, rows),
        }
    }
}

fn explicit<F: Field>(field: &F, n: usize, rows: &[Vec<String>]) -> Result<DetScheme<F>, CliError> {
    let mut polys = Vec::new();
    let mut grid = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut prow = Vec::new();
        let mut drow = Vec::new();
        for (j, s) in row.iter().enumerate() {
            let p = Poly::parse(field, n + 1, s)
                .map_err(|e| CliError::Usage(format!("entry ({i},{j}): {e}")))?;
            let d = p.degree().ok_or_else(|| {
                CliError::Usage(format!(
                    "entry ({i},{j}) is zero; give a degree grid instead"
                ))
            })?;
            prow.push(p);
            drow.push(d as i32);
        }
        polys.push(prow);
        grid.push(drow);
    }
    let dm = DegreeMatrix::from_entry_degrees(n, &grid)?;
    // Rows and columns in the ascending degree order of the matrix shape.
    let mut cols: Vec<usize> = (0..grid[0].len()).collect();
    cols.sort_by_key(|&j| grid[0][j]);
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by_key(|&i| grid[0][0] - grid[i][0]);
    let sorted = order
        .iter()
        .map(|&i| cols.iter().map(|&j| polys[i][j].clone()).collect())
        .collect();
    Ok(DetScheme::build(field, dm, BuildMode::Explicit(sorted))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use detres_core::Fp;

    #[test]
    fn every_builtin_builds() {
        let f = Fp::default_prime();
        for fx in builtin() {
            let s = fx.scheme(&f, 1).unwrap();
            assert_eq!(s.c(), s.ncols() - s.t() + 1, "{}", fx.name);
        }
    }

    #[test]
    fn malformed_grid_names_the_entry() {
        let err = parse_fixture_file("name = x\nn = 3\ndegrees = 1 1 2; 1 q 2", "t").unwrap_err();
        assert!(err.to_string().contains("row 1, column 1"), "{err}");
        let fx = parse_fixture_file("name = x\nn = 3\ndegrees = 1 1 2; 1 2 2", "t").unwrap();
        let err = fx.scheme(&Fp::default_prime(), 1).unwrap_err();
        assert!(err.to_string().contains("entry (1,"), "{err}");
    }

    #[test]
    fn explicit_columns_are_reordered() {
        let fx = parse_fixture_file("name = x\nn = 3\nentries = x0^2, x1; x2^2, x3", "t").unwrap();
        let s = fx.scheme(&Fp::default_prime(), 1).unwrap();
        assert_eq!(s.degrees.a, vec![1, 2]);
        assert_eq!(s.entry(0, 0).render(), "x1");
    }
}
