use sperner_core::bounds::{bounds_report, BoundsReport};

use crate::failure::Failure;
use crate::output::decimal;
use crate::{BoundsArgs, Format};

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn text(rep: &BoundsReport) -> String {
    let ctx = &rep.ctx;
    let mut lines = vec![
        format!("n={} k={} c={} r={}", ctx.n, ctx.k, ctx.c, ctx.r),
        format!("mms={} ({})", rep.mms, decimal(&rep.mms, 6)),
    ];
    match &rep.theorem5_upper {
        Some(v) => lines.push(format!("theorem5_upper={v}")),
        None => lines.push("theorem5_upper=n/a".into()),
    }
    if let (Some(v), Some(t)) = (rep.lemma5_upper, rep.t_value) {
        lines.push(format!("lemma5_upper={v} (t={t})"));
    }
    if let Some((lo, hi)) = rep.theorem6 {
        lines.push(format!("theorem6_range={{{lo},{hi}}}"));
    }
    lines.push(format!("upper={}", rep.best_upper()));
    lines.push(format!("lower={} ({})", rep.best_lower, rep.witness));
    if rep.is_exact() {
        lines.push(format!("SP={} exact", rep.best_lower));
    } else {
        lines.push(format!("SP in [{}, {}]", rep.best_lower, rep.best_upper()));
    }
    lines.join("\n") + "\n"
}

fn csv(rep: &BoundsReport) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Usage(e.to_string());
    w.write_record([
        "n", "k", "c", "r", "mms", "theorem5_upper", "lemma5_upper", "theorem6_lo", "theorem6_hi", "lower", "upper",
        "exact", "witness",
    ])
    .map_err(io)?;
    let ctx = &rep.ctx;
    w.write_record([
        ctx.n.to_string(),
        ctx.k.to_string(),
        ctx.c.to_string(),
        ctx.r.to_string(),
        rep.mms.to_string(),
        opt(&rep.theorem5_upper),
        opt(&rep.lemma5_upper),
        opt(&rep.theorem6.map(|t| t.0)),
        opt(&rep.theorem6.map(|t| t.1)),
        rep.best_lower.to_string(),
        rep.best_upper().to_string(),
        rep.is_exact().to_string(),
        rep.witness.to_string(),
    ])
    .map_err(io)?;
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

pub fn run(a: &BoundsArgs) -> Result<(), Failure> {
    let rep = bounds_report(a.n, a.k)?;
    let out = match a.format {
        Format::Text => text(&rep),
        Format::Csv => csv(&rep)?,
    };
    print!("{out}");
    Ok(())
}
