//! Artifact serialization. Every artifact embeds the configuration that
//! produced it: JSON under `config`, CSV as a leading `# config:` comment.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'a str,
    config: &'a Value,
    result: &'a T,
}

fn ser_err(e: impl std::fmt::Display) -> Error {
    Error::Config(format!("serialization failed: {e}"))
}

/// Pretty JSON with a trailing newline. Object keys of `config` are sorted,
/// so equal inputs give byte-identical output.
pub fn to_json<T: Serialize>(command: &str, config: &Value, result: &T) -> Result<String> {
    let env = Envelope {
        schema: SCHEMA_VERSION,
        command,
        config,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).map_err(ser_err)?;
    s.push('\n');
    Ok(s)
}

/// CSV with a header row, preceded by `# schema: v1` and `# config: {json}`.
pub fn to_csv<R: Serialize>(config: &Value, rows: &[R]) -> Result<String> {
    let mut out = format!(
        "# schema: {SCHEMA_VERSION}\n# config: {}\n",
        serde_json::to_string(config).map_err(ser_err)?
    );
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(ser_err)?;
    }
    let body = w.into_inner().map_err(ser_err)?;
    out.push_str(&String::from_utf8(body).map_err(ser_err)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[derive(Serialize)]
    struct Row {
        s: f64,
        k: u32,
    }

    #[test]
    fn csv_layout() {
        let cfg = json!({"tau": 2.0, "K": 40});
        let s = to_csv(&cfg, &[Row { s: 0.5, k: 1 }, Row { s: 0.25, k: 2 }]).unwrap();
        assert_eq!(s, "# schema: v1\n# config: {\"K\":40,\"tau\":2.0}\ns,k\n0.5,1\n0.25,2\n");
    }

    #[test]
    fn json_envelope() {
        let s = to_json("dimension", &json!({"tau": 1}), &json!({"s": 0.5})).unwrap();
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["schema"], "v1");
        assert_eq!(v["config"]["tau"], 1);
        assert!(s.ends_with('\n'));
    }
}
