use clap::ValueEnum;
use oblique_core::DiagnosticsReport;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Seventeen significant digits, enough to reproduce any `f64` exactly.
pub fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

/// Builds a `quantity,value` table.
#[derive(Default)]
pub struct QuantityTable {
    rows: Vec<(String, String)>,
}

impl QuantityTable {
    pub fn text(&mut self, name: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.rows.push((name.into(), value.into()));
        self
    }

    pub fn num(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.text(name, number(value))
    }

    pub fn opt(&mut self, name: impl Into<String>, value: Option<f64>) -> &mut Self {
        self.text(name, optional(value))
    }

    pub fn vector(&mut self, name: &str, values: &[f64]) -> &mut Self {
        for (i, v) in values.iter().enumerate() {
            self.num(format!("{name}[{i}]"), *v);
        }
        self
    }

    pub fn render(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["quantity", "value"])
            .expect("in-memory write");
        for (name, value) in &self.rows {
            w.write_record([name, value]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

pub fn report_csv(r: &DiagnosticsReport) -> String {
    let mut t = QuantityTable::default();
    t.num("cos_phi", r.cos_phi)
        .text("feasible", r.feasible.to_string())
        .opt("mu_fis", r.mu_fis)
        .opt("mu_gs", r.mu_gs)
        .opt("eta_fis", r.eta_fis)
        .opt("eta_gs", r.eta_gs)
        .opt("kappa_g", r.kappa_g)
        .opt("kappa_weighted", r.kappa_weighted)
        .num("u_lower_bound", r.u_bounds.lower)
        .num("u_upper_bound", r.u_bounds.upper)
        .num("g_lower_bound", r.g_bounds.lower)
        .num("g_upper_bound", r.g_bounds.upper)
        .text("dim_u", r.dim_u.to_string())
        .text("dim_g", r.dim_g.to_string())
        .text("coincide_dim", r.coincide_dim.to_string())
        .text("coincide_tight", r.coincide_tight.to_string())
        .text("violation", r.violation.clone().unwrap_or_default());
    t.render()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 1.7677669529663689, 0.0] {
            assert_eq!(number(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(number(1.25), "1.2500000000000000e0");
    }

    #[test]
    fn table_quotes_when_needed() {
        let mut t = QuantityTable::default();
        t.text("violation", "a, b").num("x", 2.0).opt("y", None);
        assert_eq!(
            t.render(),
            "quantity,value\nviolation,\"a, b\"\nx,2.0000000000000000e0\ny,\n"
        );
    }
}
