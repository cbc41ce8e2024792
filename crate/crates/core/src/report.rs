//! Stable text renderings and JSON documents for results. Coordinates and
//! agents are numbered from 1.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::economy::WalrasianResult;
use crate::io::vector_to_value;
use crate::pareto::{BargainingPlan, Certificate, Classification, InfeasibilityReport, WelfareFunction};
use crate::polyhedron::{Face, HRep};
use crate::rational::{format_rational, format_vector, IndexSet, Rational};

fn agents(set: &IndexSet) -> String {
    let items: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn face_summary(face: &Face) -> String {
    let vertices: Vec<String> = face.vertices().into_iter().map(|v| format_vector(v)).collect();
    let mut s = format!("dim {} vertices {}", face.dim(), vertices.join(" "));
    let rays = face.rays();
    if !rays.is_empty() {
        let rays: Vec<String> = rays.into_iter().map(|r| format_vector(r)).collect();
        let _ = write!(s, " rays {}", rays.join(" "));
    }
    s
}

pub fn render_certificate(cert: &Certificate) -> String {
    let mut out = format!("certificate with {} step(s)\n", cert.len());
    for (t, (phi, face)) in cert.normals.iter().zip(&cert.faces).enumerate() {
        let _ = write!(out, "step {}: φ={}", t + 1, format_vector(phi));
        if t > 0 {
            if let Some(lambda) = cert.lambdas.get(t - 1) {
                let _ = write!(out, " λ={}", format_rational(lambda));
            }
        }
        let _ = writeln!(
            out,
            " max={} face {}",
            format_rational(&cert.values[t]),
            face_summary(face)
        );
    }
    out
}

pub fn render_classification(c: &Classification) -> String {
    if !c.in_set {
        return "point not in set\n".to_string();
    }
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut out = format!(
        "pareto optimal: {}\nmaximizes a nonnegative normal: {}\nmaximizes a strictly positive normal: {}\n",
        yes(c.pareto),
        yes(c.plus),
        yes(c.plus_plus)
    );
    if let Some(d) = &c.dominator {
        let _ = writeln!(out, "dominated by {}", format_vector(d));
    }
    if let Some(phi) = &c.positive_normal {
        let _ = writeln!(out, "positive normal {}", format_vector(phi));
    } else if let Some(phi) = &c.nonnegative_normal {
        let _ = writeln!(out, "nonnegative normal {}", format_vector(phi));
    }
    out
}

pub fn render_bargaining(plan: &BargainingPlan) -> String {
    let mut out = String::new();
    for (r, round) in plan.rounds.iter().enumerate() {
        let powers: Vec<String> = round.powers.values().map(format_rational).collect();
        let label = if powers.len() == 1 { "power" } else { "powers" };
        let _ = writeln!(
            out,
            "round {}: agents {}, {} {}",
            r + 1,
            agents(&round.agents),
            label,
            powers.join(",")
        );
    }
    out
}

pub fn render_welfare(w: &WelfareFunction) -> String {
    let terms: Vec<String> = w
        .normals
        .iter()
        .map(|phi| format!("⟨{}, u' - {}⟩", format_vector(phi), format_vector(&w.base)))
        .collect();
    format!("W(u') = min {{ {} }}\n", terms.join(", "))
}

pub fn render_walrasian(r: &WalrasianResult) -> String {
    let mut out = format!("prices {}\n", format_vector(&r.prices));
    for (i, a) in r.agents.iter().enumerate() {
        let _ = writeln!(
            out,
            "agent {}: budget {}, endowment utility {}, best affordable {} at {}",
            i + 1,
            format_rational(&a.budget),
            format_rational(&a.endowment_utility),
            format_rational(&a.attained),
            format_vector(&a.demand)
        );
    }
    let _ = writeln!(out, "verified: {}", if r.verified { "yes" } else { "no" });
    out
}

pub fn render_infeasibility(r: &InfeasibilityReport) -> String {
    let mut out = format!(
        "no partition certificate: {} pattern step(s) explored, {} dead end(s)\n",
        r.explored,
        r.dead_ends.len()
    );
    for prefix in &r.dead_ends {
        let blocks: Vec<String> = prefix.iter().map(agents).collect();
        let _ = writeln!(out, "dead end: {}", blocks.join(" then "));
    }
    out
}

pub fn render_hrep(h: &HRep) -> String {
    let mut out = String::new();
    for c in &h.ineqs {
        let _ = writeln!(out, "{} · v <= {}", format_vector(&c.normal), format_rational(&c.rhs));
    }
    for c in &h.eqs {
        let _ = writeln!(out, "{} · v = {}", format_vector(&c.normal), format_rational(&c.rhs));
    }
    out
}

fn rational_value(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn classification_json(c: &Classification) -> Value {
    let opt = |v: &Option<Vec<Rational>>| v.as_ref().map_or(Value::Null, |v| vector_to_value(v));
    json!({
        "in_set": c.in_set,
        "pareto": c.pareto,
        "plus": c.plus,
        "plus_plus": c.plus_plus,
        "dominator": opt(&c.dominator),
        "nonnegative_normal": opt(&c.nonnegative_normal),
        "positive_normal": opt(&c.positive_normal),
    })
}

pub fn certificate_json(cert: &Certificate) -> Value {
    serde_json::to_value(cert.to_doc()).expect("certificate documents serialize")
}

pub fn bargaining_json(plan: &BargainingPlan) -> Value {
    json!({
        "base": vector_to_value(&plan.base),
        "rounds": plan.rounds.iter().map(|r| json!({
            "step": r.step,
            "agents": r.agents.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "powers": r.powers.values().map(rational_value).collect::<Vec<_>>(),
            "normal": vector_to_value(&r.normal),
        })).collect::<Vec<_>>(),
    })
}

pub fn infeasibility_json(r: &InfeasibilityReport) -> Value {
    json!({
        "found": false,
        "explored": r.explored,
        "dead_ends": r.dead_ends.iter().map(|p| p.iter()
            .map(|b| b.iter().map(|i| i + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::fixtures::u2;
    use crate::pareto::{bargaining_plan, classify, construct_certificate, Strategy};
    use crate::rational::ivec;

    #[test]
    fn certificate_lines() {
        let cert = construct_certificate(&u2(), &ivec(&[1, 1]), &Strategy::Flag).unwrap();
        let text = render_certificate(&cert);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[1].starts_with("step 1: φ=(1,0) max=1 face dim 1"));
        assert!(lines[2].starts_with("step 2: φ=(3,1) λ=2 max=4 face dim 0 vertices (1,1)"));
        assert_eq!(render_certificate(&cert), text);
    }

    #[test]
    fn classification_lines() {
        let p = u2();
        assert_eq!(
            render_classification(&classify(&p, &ivec(&[5, 5])).unwrap()),
            "point not in set\n"
        );
        let text = render_classification(&classify(&p, &ivec(&[1, 0])).unwrap());
        assert!(text.contains("pareto optimal: no"));
        assert!(text.contains("dominated by (1,1)"));
        let v = classification_json(&classify(&p, &ivec(&[1, 0])).unwrap());
        assert_eq!(v["dominator"], json!(["1", "1"]));
        assert_eq!(v["plus"], json!(true));
    }

    #[test]
    fn bargaining_lines() {
        let p = u2();
        let u = ivec(&[1, 1]);
        let cert = construct_certificate(&p, &u, &Strategy::Flag).unwrap();
        let plan = bargaining_plan(&cert, &u).unwrap();
        assert_eq!(
            render_bargaining(&plan),
            "round 1: agents {1}, power 1\nround 2: agents {2}, power 1\n"
        );
        assert_eq!(bargaining_json(&plan)["rounds"][1]["agents"], json!([2]));
    }
}
