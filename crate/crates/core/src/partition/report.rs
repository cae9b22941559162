use std::fmt::Write;

use crate::graph::VertexSet;
use crate::partition::Partition;

/// Sets with at least this many members are summarized by size.
pub const DEFAULT_PRINT_TOL: usize = 13;

/// `%g`-style formatting with `sig` significant digits.
pub fn format_significant(x: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn show_set(out: &mut String, label: &str, set: &VertexSet, print_tol: usize) {
    if set.len() < print_tol {
        let body: Vec<String> = set.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{label}: {}", body.join(" ")).unwrap();
    } else {
        writeln!(out, "{label}: size {}", set.len()).unwrap();
    }
}

/// Text summary of a partition: sizes, `λ₂`, the boundary, then the sets.
pub fn report(p: &Partition, print_tol: usize) -> String {
    let (a_prime, b_prime) = p.split_sizes();
    let mut out = String::new();
    out.push_str("Sizes of various elements:\n\n");
    writeln!(out, "\t# A', B':         {a_prime} {b_prime}").unwrap();
    writeln!(out, "\tLambda2:          {}", format_significant(p.lambda2, 6)).unwrap();
    writeln!(out, "\t# D:              {}", p.boundary.degrees.len()).unwrap();
    writeln!(out, "\t# H:              {}", p.boundary.e1.len()).unwrap();
    writeln!(out, "\t# A1 and B1:      {} {}", p.boundary.a1.len(), p.boundary.b1.len()).unwrap();
    show_set(&mut out, "A", &p.a, print_tol);
    show_set(&mut out, "B", &p.b, print_tol);
    show_set(&mut out, "S", &p.s, print_tol);
    out
}
