//! Deterministic JSON emission: insertion-ordered keys, floats at 17
//! significant digits, non-finite values as null. Records hash themselves
//! over everything except wall time, so identical scenarios give identical
//! hashes across runs.

use sha2::{Digest, Sha256};

#[derive(Clone, Debug)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj() -> Self {
        Json::Obj(Vec::new())
    }

    pub fn push(&mut self, key: &str, value: Json) {
        let Json::Obj(entries) = self else {
            panic!("push on non-object json value");
        };
        entries.push((key.to_string(), value));
    }

    pub fn num(v: f64) -> Self {
        Json::Num(v)
    }

    pub fn str(v: impl Into<String>) -> Self {
        Json::Str(v.into())
    }

    pub fn opt_num(v: Option<f64>) -> Self {
        match v {
            Some(x) => Json::Num(x),
            None => Json::Null,
        }
    }

    pub fn vec3(v: &[f64; 3]) -> Self {
        Json::Arr(v.iter().map(|x| Json::Num(*x)).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, depth: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::Num(v) => {
                if v.is_finite() {
                    out.push_str(&format!("{v:.16e}"));
                } else {
                    out.push_str("null");
                }
            }
            Json::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\t' => out.push_str("\\t"),
                        '\r' => out.push_str("\\r"),
                        c if (c as u32) < 0x20 => {
                            out.push_str(&format!("\\u{:04x}", c as u32));
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    out.push_str(&"  ".repeat(depth + 1));
                    item.write(out, depth + 1);
                }
                out.push('\n');
                out.push_str(&"  ".repeat(depth));
                out.push(']');
            }
            Json::Obj(entries) => {
                if entries.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    out.push_str(&"  ".repeat(depth + 1));
                    out.push('"');
                    out.push_str(k);
                    out.push_str("\": ");
                    v.write(out, depth + 1);
                }
                out.push('\n');
                out.push_str(&"  ".repeat(depth));
                out.push('}');
            }
        }
    }
}

/// Wraps command output in the run-record envelope: scenario echo, outputs,
/// version, content hash over everything except wall time.
pub fn run_record(command: &str, scenario: Json, outputs: Json, wall_ms: f64) -> Json {
    let mut hashed = Json::obj();
    hashed.push("artifact", Json::str("rdl"));
    hashed.push("version", Json::str(env!("CARGO_PKG_VERSION")));
    hashed.push("command", Json::str(command));
    hashed.push("scenario", scenario);
    hashed.push("outputs", outputs);
    let digest = Sha256::digest(hashed.render().as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hashed.push("content_hash", Json::str(format!("sha256:{hex}")));
    hashed.push("wall_time_ms", Json::Num(wall_ms));
    hashed
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_rendering() {
        let mut o = Json::obj();
        o.push("a", Json::Int(1));
        o.push("b", Json::Num(0.5));
        o.push("c", Json::Arr(vec![Json::Bool(true), Json::Null]));
        let r = o.render();
        assert!(r.contains("\"b\": 5.0000000000000000e-1"));
        assert_eq!(r, o.render());
    }

    #[test]
    fn non_finite_becomes_null() {
        let mut o = Json::obj();
        o.push("x", Json::Num(f64::NAN));
        assert!(o.render().contains("\"x\": null"));
    }

    #[test]
    fn hash_ignores_wall_time() {
        let rec1 = run_record("t", Json::obj(), Json::obj(), 1.0);
        let rec2 = run_record("t", Json::obj(), Json::obj(), 99.0);
        let hash = |r: &Json| {
            let Json::Obj(e) = r else { unreachable!() };
            e.iter()
                .find(|(k, _)| k == "content_hash")
                .map(|(_, v)| format!("{v:?}"))
                .unwrap()
        };
        assert_eq!(hash(&rec1), hash(&rec2));
    }
}
