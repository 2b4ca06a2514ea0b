use bloch_speed::speed::SpeedSample;
use serde_json::{json, Value};

pub const QUBIT_HEADER: &str = "t,v,v_R,v_T,r_x,r_y,r_z,purity";

/// One output row per sample time.
#[derive(Clone, Debug, PartialEq)]
pub struct SpeedTable {
    pub samples: Vec<SpeedSample>,
}

/// 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl SpeedTable {
    fn bloch_dim(&self) -> usize {
        self.samples.first().map_or(3, |s| s.r.len())
    }

    /// Column names; qubit tables use r_x, r_y, r_z, larger systems r_1 … r_{n²−1}.
    pub fn columns(&self) -> Vec<String> {
        let d = self.bloch_dim();
        if d == 3 {
            return QUBIT_HEADER.split(',').map(str::to_string).collect();
        }
        let mut cols: Vec<String> = ["t", "v", "v_R", "v_T"].iter().map(|s| s.to_string()).collect();
        cols.extend((1..=d).map(|j| format!("r_{j}")));
        cols.push("purity".into());
        cols
    }

    fn row_values(s: &SpeedSample) -> Vec<f64> {
        let mut row = vec![s.t, s.v, s.v_radial, s.v_tangential];
        row.extend_from_slice(&s.r);
        row.push(s.purity);
        row
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns().join(",");
        out.push('\n');
        for s in &self.samples {
            let row: Vec<String> = Self::row_values(s).into_iter().map(fmt_real).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Vec<f64>> = self.samples.iter().map(Self::row_values).collect();
        json!({ "columns": self.columns(), "rows": rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bloch_speed::speed::SpeedDecomposition;

    fn sample(t: f64, r: Vec<f64>) -> SpeedSample {
        SpeedSample {
            t,
            v: 1.5,
            v_radial: 0.0,
            v_tangential: 1.5,
            radial_rate: 0.0,
            purity: 1.0,
            decomposition: SpeedDecomposition {
                unitary: 2.25,
                cross: 0.0,
                dissipator: 0.0,
            },
            r,
        }
    }

    #[test]
    fn qubit_csv_layout() {
        let table = SpeedTable {
            samples: vec![sample(0.0, vec![0.0, 0.0, 0.5]), sample(0.1, vec![0.1, -0.2, 0.3])],
        };
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), QUBIT_HEADER);
        assert_eq!(
            lines.next().unwrap(),
            "0.0000000000000000e0,1.5000000000000000e0,0.0000000000000000e0,1.5000000000000000e0,\
             0.0000000000000000e0,0.0000000000000000e0,5.0000000000000000e-1,1.0000000000000000e0"
        );
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn wider_tables_number_components() {
        let table = SpeedTable {
            samples: vec![sample(0.0, vec![0.0; 8])],
        };
        let cols = table.columns();
        assert_eq!(cols.len(), 4 + 8 + 1);
        assert_eq!(cols[4], "r_1");
        assert_eq!(cols[11], "r_8");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        let x = 0.1 + 0.2;
        assert_eq!(fmt_real(x).parse::<f64>().unwrap(), x);
        let y = std::f64::consts::PI * 1e-200;
        assert_eq!(fmt_real(y).parse::<f64>().unwrap(), y);
    }
}
