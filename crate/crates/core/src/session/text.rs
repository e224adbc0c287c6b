use std::fmt::Write;

use super::report::{Battery, Report};

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn series_text(num: &[i64], k: u32) -> String {
    let mut s = String::new();
    for (i, &c) in num.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else if s.is_empty() { "" } else { "+" };
        let body = match (i, c.unsigned_abs()) {
            (0, a) => a.to_string(),
            (1, 1) => "t".into(),
            (1, a) => format!("{a}t"),
            (_, 1) => format!("t^{i}"),
            (_, a) => format!("{a}t^{i}"),
        };
        s.push_str(sign);
        s.push_str(&body);
    }
    if s.is_empty() {
        s.push('0');
    }
    format!("({s}) / (1-t)^{k}")
}

/// Human-readable rendering of a report as aligned tables.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let inst = &report.instance;
    let _ = writeln!(out, "ring {} = Q[{}]", inst.ring, inst.vars.join(", "));
    if !inst.presentation.is_empty() {
        let _ = writeln!(out, "  modulo ({})", inst.presentation.join(", "));
    }
    let _ = writeln!(out, "  dimension {}", inst.dimension);
    let width = inst.ideals.iter().map(|i| i.name.len()).max().unwrap_or(0);
    for i in &inst.ideals {
        let _ = writeln!(out, "  {:<width$} = ({})", i.name, i.generators.join(", "));
    }
    if let Some(b) = &report.battery {
        battery_text(&mut out, b);
    }
    for r in &report.results {
        let _ = writeln!(out, "\n{}  [line {}]", r.directive, r.line);
        let body = serde_json::to_string_pretty(&r.value).unwrap_or_default();
        for line in body.lines() {
            let _ = writeln!(out, "  {line}");
        }
    }
    out
}

fn battery_text(out: &mut String, b: &Battery) {
    let red = &b.reduction;
    let _ = writeln!(out, "\npair I = {}, J = {}", b.pair["I"], b.pair["J"]);
    let _ = writeln!(out, "  reduction number r   {}", red.r);
    let _ = writeln!(out, "  m-reduction number   {}", red.rm);
    let _ = writeln!(out, "  J minimal reduction  {}", if red.minimal { "yes" } else { "no" });

    let _ = writeln!(out, "\nlength sums");
    let last = b.sums.values().map(|t| t.safety_index).max().unwrap_or(0);
    let mut header = format!("  {:<10}", "family");
    for n in 0..=last {
        let _ = write!(header, "{:>6}", format!("n={n}"));
    }
    let _ = writeln!(out, "{header}{:>8}", "total");
    for (name, t) in &b.sums {
        let mut row = format!("  {name:<10}");
        for n in 0..=last {
            match t.terms.get(&n) {
                Some(v) => {
                    let _ = write!(row, "{v:>6}");
                }
                None => row.push_str(&format!("{:>6}", ".")),
            }
        }
        let _ = writeln!(out, "{row}{:>8}", t.total);
    }

    let _ = writeln!(out, "\nHilbert series");
    for (name, s) in [("G", &b.series.g), ("F", &b.series.f)] {
        let _ = writeln!(out, "  {name}  {:<32} e0 = {:<4} e1 = {}", series_text(&s.numerator, s.denominator_exponent), s.e0, s.e1);
    }

    let _ = writeln!(out, "\ndepth and Cohen-Macaulayness");
    for (name, cert, verdict, why) in [
        ("G", &b.depth.g, b.cm.g.verdict, &b.cm.g.justification),
        ("F", &b.depth.f, b.cm.f.verdict, &b.cm.f.justification),
    ] {
        let seq: Vec<&str> = cert.sequence.iter().map(|e| e.element.as_str()).collect();
        let _ = writeln!(out, "  {name}  depth >= {:<2} {:<7} sequence [{}]", cert.lower_bound, verdict.as_str(), list(&seq));
        let _ = writeln!(out, "      {why}");
    }
    let ft = &b.cm.f.fiber_test;
    let _ = writeln!(out, "  fiber test: e0(F) = {}, sum = {} ({})", ft.e0, ft.sum, list(&ft.terms));
    for c in &ft.comparisons {
        let mark = if c.mu < c.weighted { "  <" } else { "" };
        let _ = writeln!(out, "    n = {}: mu(I^n) = {:<4} weighted = {}{mark}", c.n, c.mu, c.weighted);
    }

    let _ = writeln!(out, "\nstatements");
    let w = b.checklist.iter().map(|v| v.id.len()).max().unwrap_or(0);
    for v in &b.checklist {
        let holds = if v.hypothesis_holds { "holds" } else { "fails" };
        let _ = writeln!(out, "  {:<w$}  {holds:<5}  {}", v.id, v.observed.as_str());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_rendering() {
        assert_eq!(series_text(&[18, 6, 0, 0, 1], 2), "(18+6t+t^4) / (1-t)^2");
        assert_eq!(series_text(&[5, 0, 6, -4, 1], 3), "(5+6t^2-4t^3+t^4) / (1-t)^3");
        assert_eq!(series_text(&[0], 1), "(0) / (1-t)^1");
    }
}
