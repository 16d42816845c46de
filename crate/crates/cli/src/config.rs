//! `--config FILE` support: `key = value` lines become `--key value` flags
//! unless the same flag is already on the command line.

use std::path::Path;

use crate::error::CliError;

fn config_path(argv: &[String]) -> Option<String> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    })
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", lineno + 1)))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" || key == "out" {
            return Err(CliError::Usage(format!("config line {}: key '{key}' not allowed", lineno + 1)));
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

/// Inserts config flags right after the subcommand name.
pub fn expand(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(Path::new(&path), e))?;
    let present = |key: &str| {
        let flag = format!("--{key}");
        argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
    };
    let extra: Vec<String> = parse_config(&text)?
        .into_iter()
        .filter(|(k, _)| !present(k))
        .flat_map(|(k, v)| [format!("--{k}"), v])
        .collect();
    let split = argv.len().min(2);
    let mut out = argv[..split].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[split..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_pairs_and_comments() {
        let pairs = parse_config("# grid\nL = 16\nn=128 # points\n\n--mu=0.5\n").unwrap();
        assert_eq!(
            pairs,
            vec![
                ("L".into(), "16".into()),
                ("n".into(), "128".into()),
                ("mu".into(), "0.5".into())
            ]
        );
        assert!(parse_config("L 16").is_err());
        assert!(parse_config("out=/tmp").is_err());
    }

    #[test]
    fn command_line_flags_win() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "n=128\nmu=0.25\n").unwrap();
        let argv = strings(&["ks-lab", "simulate", "--mu", "2", "--config", path.to_str().unwrap()]);
        let out = expand(argv).unwrap();
        assert_eq!(out[..4], strings(&["ks-lab", "simulate", "--n", "128"])[..]);
        assert!(!out.contains(&"0.25".to_string()));
    }
}
