//! Bundled regression sessions. Each file carries its expected values as
//! comment lines `# expect <path> = <json>`, where `<path>` walks the
//! structured report: object keys, array indices, or the `id` of an array
//! element.

use serde_json::Value;

pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
}

pub const CORPUS: [CorpusEntry; 4] = [
    CorpusEntry { name: "three_quadrics", text: include_str!("../../corpus/three_quadrics.session") },
    CorpusEntry { name: "quotient_surface", text: include_str!("../../corpus/quotient_surface.session") },
    CorpusEntry { name: "cubic_monomials", text: include_str!("../../corpus/cubic_monomials.session") },
    CorpusEntry { name: "plane_quintics", text: include_str!("../../corpus/plane_quintics.session") },
];

#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub path: String,
    pub expected: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub path: String,
    pub expected: Value,
    pub found: Option<Value>,
}

/// Reads the `# expect` lines of a session file.
pub fn expectations(text: &str) -> Result<Vec<Expectation>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let Some(rest) = line.trim().strip_prefix("# expect ") else { continue };
        let (path, value) = rest.split_once('=').ok_or_else(|| format!("line {}: missing `=`", n + 1))?;
        let expected = serde_json::from_str(value.trim()).map_err(|e| format!("line {}: {e}", n + 1))?;
        out.push(Expectation { path: path.trim().to_string(), expected });
    }
    Ok(out)
}

/// Looks up a dotted path in a report.
pub fn lookup<'a>(root: &'a Value, path: &str) -> Option<&'a Value> {
    let mut cur = root;
    for seg in path.split('.') {
        cur = match cur {
            Value::Object(map) => map.get(seg)?,
            Value::Array(items) => match seg.parse::<usize>() {
                Ok(i) => items.get(i)?,
                Err(_) => items.iter().find(|item| item.get("id").and_then(Value::as_str) == Some(seg))?,
            },
            _ => return None,
        };
    }
    Some(cur)
}

pub fn check_expectations(report: &Value, expected: &[Expectation]) -> Vec<Mismatch> {
    expected
        .iter()
        .filter_map(|e| {
            let found = lookup(report, &e.path);
            (found != Some(&e.expected)).then(|| Mismatch { path: e.path.clone(), expected: e.expected.clone(), found: found.cloned() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn every_entry_parses_and_has_expectations() {
        for entry in &CORPUS {
            super::super::parse_session(entry.text).unwrap();
            assert!(expectations(entry.text).unwrap().len() >= 10, "{}", entry.name);
        }
    }

    #[test]
    fn paths() {
        let v = json!({"a": {"b": [10, {"id": "k", "x": 3}]}, "sums": {"FC1": {"terms": {"1": 1}}}});
        assert_eq!(lookup(&v, "a.b.0"), Some(&json!(10)));
        assert_eq!(lookup(&v, "a.b.k.x"), Some(&json!(3)));
        assert_eq!(lookup(&v, "sums.FC1.terms.1"), Some(&json!(1)));
        assert_eq!(lookup(&v, "a.c"), None);
        let exp = expectations("# expect a.b.0 = 10\n# expect a.b.k.x = 4\n").unwrap();
        let bad = check_expectations(&v, &exp);
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].found, Some(json!(3)));
    }
}
