use std::io::Write;

use miop::exact::{fmt_rational, EtaPolynomial};
use miop::multi_indexed::MultiIndexedSystem;
use miop::Error;
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig, Setup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRow {
    pub n: usize,
    pub energy: String,
    /// Coefficients of `P_{D,n}` in `eta`, lowest degree first.
    pub coefficients: Vec<String>,
    /// `d_n^2` enclosure; both ends agree when it is rational.
    pub dn_sq: [String; 2],
    pub dt_sq: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRow {
    pub x: i64,
    pub w: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub schema_version: u32,
    pub config: RunConfig,
    pub ell: usize,
    pub xi: Vec<String>,
    pub c_d: String,
    pub rows: Vec<PolyRow>,
    pub weights: Vec<WeightRow>,
}

fn coeffs(p: &EtaPolynomial) -> Vec<String> {
    p.coeffs().iter().map(fmt_rational).collect()
}

pub fn tabulate(cfg: &RunConfig, s: &Setup) -> Result<Table, Error> {
    let sys = MultiIndexedSystem::build(&s.params, &s.deletions, cfg.n_max)?;
    let p = &s.params;
    let rows = (0..=cfg.n_max)
        .map(|n| {
            let dn = p.dn_sq(n)?;
            Ok(PolyRow {
                n,
                energy: fmt_rational(&p.energy(n)),
                coefficients: coeffs(sys.p_poly(n)),
                dn_sq: [fmt_rational(&dn.lo), fmt_rational(&dn.hi)],
                dt_sq: fmt_rational(&sys.multi_poly(n).dt_sq),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let weights = (0..=cfg.x_max)
        .map(|x| WeightRow { x, w: fmt_rational(&sys.weight(x)) })
        .collect();
    Ok(Table {
        schema_version: crate::verify::SCHEMA_VERSION,
        config: cfg.clone(),
        ell: sys.ell,
        xi: coeffs(&sys.xi),
        c_d: fmt_rational(&sys.c_d),
        rows,
        weights,
    })
}

/// CSV layout: one value per row, `quantity,n,x,k,value`.
pub fn write_table(t: &Table, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, t)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["quantity", "n", "x", "k", "value"])?;
            w.write_record(["ell", "", "", "", &t.ell.to_string()])?;
            w.write_record(["c_d", "", "", "", &t.c_d])?;
            for (k, c) in t.xi.iter().enumerate() {
                w.write_record(["xi", "", "", &k.to_string(), c])?;
            }
            for r in &t.rows {
                let n = r.n.to_string();
                w.write_record(["energy", &n, "", "", &r.energy])?;
                for (k, c) in r.coefficients.iter().enumerate() {
                    w.write_record(["p", &n, "", &k.to_string(), c])?;
                }
                w.write_record(["dn_sq_lo", &n, "", "", &r.dn_sq[0]])?;
                w.write_record(["dn_sq_hi", &n, "", "", &r.dn_sq[1]])?;
                w.write_record(["dt_sq", &n, "", "", &r.dt_sq])?;
            }
            for r in &t.weights {
                w.write_record(["weight", "", &r.x.to_string(), "", &r.w])?;
            }
            w.flush()
        }
    }
}
