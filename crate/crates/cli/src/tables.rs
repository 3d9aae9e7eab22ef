//! The `census` and `character-table` outputs.

use k1hecke_core::arith::FieldTower;
use k1hecke_core::characters::{cuspidal_sheets, eta, lift, CharacterOracle};
use k1hecke_core::divhecke::{DivisorHeckeOp, HeckeFn, Normalization};
use k1hecke_core::error::Result;
use k1hecke_core::groups::{elliptic_class, Kind};
use serde::Serialize;

use crate::report::markdown_table;
use crate::suites::{census_rows, Ctx};

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_markdown(&self) -> String {
        let h: Vec<&str> = self.header.iter().map(String::as_str).collect();
        format!("# {}\n\n{}", self.title, markdown_table(&h, &self.rows))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }
}

fn title(ctx: &Ctx, what: &str) -> String {
    let g = &ctx.cfg.group;
    format!("{what}: {:?}({}, F_{})", g.kind, g.n, g.q)
}

pub fn census_table(ctx: &Ctx) -> Result<Table> {
    let header = ["λ", "|A_λ|", "G/U ×_M G/U^-", "raw A (M, M+1)", "|V_λ|", "G/U ×_M G/U", "raw V"];
    let rows = census_rows(ctx)?
        .into_iter()
        .map(|r| {
            vec![
                r.lambda.to_string(),
                r.a.to_string(),
                r.a_expected.to_string(),
                match r.raw_a {
                    Ok((x, y)) => format!("{x}, {y} (M = {})", r.precision),
                    Err(e) => format!("n/a: {e}"),
                },
                r.v.to_string(),
                r.v_expected.to_string(),
                match r.raw_v {
                    Ok(x) => x.to_string(),
                    Err(e) => format!("n/a: {e}"),
                },
            ]
        })
        .collect();
    Ok(Table { title: title(ctx, "stratum census"), header: header.iter().map(|s| s.to_string()).collect(), rows })
}

/// Cuspidal characters and, for PGL, `η` at every place of the requested
/// degrees next to the predicted value and where that prediction comes
/// from.
pub fn character_table(ctx: &Ctx) -> Result<Table> {
    let cfg = ctx.cfg;
    let (n, q) = (cfg.group.n, cfg.group.q);
    let model = k1hecke_core::bundles::BundleModel::new(
        k1hecke_core::groups::FiniteGroup::new(n, q, cfg.kind())?,
        cfg.z,
    )?;
    let g = model.group().clone();
    let oracle = CharacterOracle::new(g.clone())?;
    let sheets = cuspidal_sheets(&oracle)?;
    let header = ["θ", "dim π", "i", "x", "η (computed)", "predicted", "prediction"];
    let mut rows = Vec::new();
    for s in &sheets {
        if cfg.kind() != Kind::PGL {
            rows.push(vec![s.pair.theta.a.to_string(), s.dim.to_string(), "-".into(), "-".into(), "-".into(), "-".into(), "η needs PGL".into()]);
        }
    }
    if cfg.kind() == Kind::PGL {
        for i in cfg.degrees.clone().unwrap_or_else(|| vec![1, 2, 3, 4]) {
            let tower = FieldTower::new(q, &[n, i])?;
            for d in tower.divisors_of_degree(i)? {
                let op = DivisorHeckeOp::new(&model, &tower, d, HeckeFn::StdTrace, Normalization::Literal)?;
                for s in &sheets {
                    let ev = eta(&op, s)?;
                    let (pred, src) = if i % n != 0 {
                        ("0".to_string(), "vanishing, N ∤ i".to_string())
                    } else if i == n {
                        let x = elliptic_class(&tower, d.rep, &g)?.representative;
                        (s.value(x).to_string(), "χ_π(x), character oracle".to_string())
                    } else {
                        let l = lift(&s.pair, i / n)?;
                        (l.elliptic_value(&tower, d.rep)?.to_string(), format!("χ_Lift_{}(π)(x)", i / n))
                    };
                    let shown = if ev.consistent { ev.value.to_string() } else { format!("{} (not block-scalar)", ev.value) };
                    rows.push(vec![
                        s.pair.theta.a.to_string(),
                        s.dim.to_string(),
                        i.to_string(),
                        d.rep.value.to_string(),
                        shown,
                        pred,
                        src,
                    ]);
                }
            }
        }
    }
    Ok(Table { title: title(ctx, "cuspidal characters"), header: header.iter().map(|s| s.to_string()).collect(), rows })
}
