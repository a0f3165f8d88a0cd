use super::ideal::{ideal_as_ring, ideal_generated, subring};
use super::ring::{make_cyclic, make_matrix, make_product, unitalize, FiniteRing};
use crate::error::Result;
use std::sync::OnceLock;

/// Small rings (at most 16 elements) used by the test campaigns.
///
/// Unital entries come first; the non-unital entries at the end are
/// ideals of cyclic rings viewed as rings.
pub fn catalog() -> &'static [FiniteRing] {
    static CATALOG: OnceLock<Vec<FiniteRing>> = OnceLock::new();
    CATALOG.get_or_init(|| crate::budget::exempt(build).expect("catalog rings are valid"))
}

/// The unital part of [`catalog`].
pub fn unital_catalog() -> Vec<FiniteRing> {
    catalog().iter().filter(|r| r.is_unital()).cloned().collect()
}

/// Look a catalog ring up by name.
pub fn catalog_ring(name: &str) -> Option<FiniteRing> {
    catalog().iter().find(|r| r.name() == name).cloned()
}

fn build() -> Result<Vec<FiniteRing>> {
    let z = |n| make_cyclic(n);
    let mut out = Vec::new();
    for n in 1..=16 {
        out.push(z(n)?);
    }
    let pairs = [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (2, 8), (3, 3), (3, 4), (3, 5), (4, 4), (4, 3)];
    for (a, b) in pairs {
        out.push(make_product(&z(a)?, &z(b)?)?);
    }
    let f2 = z(2)?;
    let v4 = make_product(&f2, &f2)?;
    out.push(make_product(&v4, &f2)?.renamed("(Z/2)^3"));
    out.push(make_product(&v4, &v4)?.renamed("(Z/2)^4"));
    out.push(make_product(&v4, &z(4)?)?.renamed("(Z/2)^2xZ/4"));
    let m2 = make_matrix(&f2, 2)?.renamed("M2(Z/2)");
    out.push(m2.clone());
    // Entries are (a, b, c, d) with index 8a + 4b + 2c + d.
    let upper: Vec<usize> = m2.elements().filter(|&x| x & 2 == 0).collect();
    out.push(subring(&m2, &upper)?.0.renamed("T2(Z/2)"));
    // The companion matrix [[0,1],[1,1]] generates a copy of the field with four elements.
    out.push(subring(&m2, &[0, 0b0111, 0b1001, 0b1110])?.0.renamed("F4"));
    out.push(subring(&m2, &[0, 0b0100, 0b1001, 0b1101])?.0.renamed("Z/2[e]"));
    let z4 = z(4)?;
    let two_z4 = ideal_generated(&z4, &[2])?;
    out.push(unitalize(&ideal_as_ring(&two_z4)?)?.renamed("(2Z/4)+"));
    let z8 = z(8)?;
    out.push(unitalize(&ideal_as_ring(&ideal_generated(&z8, &[4])?)?)?.renamed("(4Z/8)+"));
    // Non-unital entries.
    out.push(ideal_as_ring(&two_z4)?.renamed("2Z/4"));
    out.push(ideal_as_ring(&ideal_generated(&z8, &[2])?)?.renamed("2Z/8"));
    out.push(ideal_as_ring(&ideal_generated(&z(16)?, &[4])?)?.renamed("4Z/16"));
    out.push(ideal_as_ring(&ideal_generated(&z(12)?, &[2])?)?.renamed("2Z/12"));
    out.push(ideal_as_ring(&ideal_generated(&m2, &[0b0100])?)?.renamed("I<M2(Z/2)"));
    let t2 = subring(&m2, &upper)?.0;
    out.push(ideal_as_ring(&ideal_generated(&t2, &[1])?)?.renamed("J<T2(Z/2)"));
    out.retain(|r| r.size() <= 16);
    Ok(out)
}

/// Spec-language lines that rebuild the catalog ring `name` under the
/// identifier `ident`, with identical element indices.
///
/// Helper declarations use `ident` followed by a suffix.
pub fn catalog_declarations(name: &str, ident: &str) -> Option<String> {
    static TEMPLATES: OnceLock<Vec<(String, String)>> = OnceLock::new();
    let templates = TEMPLATES.get_or_init(|| crate::budget::exempt(templates).expect("catalog rings are valid"));
    templates.iter().find(|(n, _)| n == name).map(|(_, t)| t.replace('@', ident))
}

fn templates() -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    let mut push = |name: &str, text: &str| out.push((name.to_string(), text.to_string()));
    for n in 1..=16 {
        push(&format!("Z/{n}"), &format!("ring @ = cyclic {n}"));
    }
    let pairs = [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (2, 8), (3, 3), (3, 4), (3, 5), (4, 4), (4, 3)];
    for (a, b) in pairs {
        let name = make_product(&make_cyclic(a)?, &make_cyclic(b)?)?.name().to_string();
        push(&name, &format!("ring @ = product (cyclic {a}) (cyclic {b})"));
    }
    push("(Z/2)^3", "ring @ = product (product (cyclic 2) (cyclic 2)) (cyclic 2)");
    push("(Z/2)^4", "ring @ = product (product (cyclic 2) (cyclic 2)) (product (cyclic 2) (cyclic 2))");
    push("(Z/2)^2xZ/4", "ring @ = product (product (cyclic 2) (cyclic 2)) (cyclic 4)");
    push("M2(Z/2)", "ring @ = matrix 2 over (cyclic 2)");
    let m2 = "ring @_m = matrix 2 over (cyclic 2)\n";
    let t2 = format!("{m2}ring @_t = subring @_m {{0, 1, 4, 5, 8, 9, 12, 13}}\n");
    push("T2(Z/2)", &format!("{m2}ring @ = subring @_m {{0, 1, 4, 5, 8, 9, 12, 13}}"));
    push("F4", &format!("{m2}ring @ = subring @_m {{0, 7, 9, 14}}"));
    push("Z/2[e]", &format!("{m2}ring @ = subring @_m {{0, 4, 9, 13}}"));
    push("(2Z/4)+", "ring @_z = cyclic 4\nideal @_i in @_z = generated {2}\nring @ = unitalize (ideal-ring @_i)");
    push("(4Z/8)+", "ring @_z = cyclic 8\nideal @_i in @_z = generated {4}\nring @ = unitalize (ideal-ring @_i)");
    for (n, g, name) in [(4, 2, "2Z/4"), (8, 2, "2Z/8"), (16, 4, "4Z/16"), (12, 2, "2Z/12")] {
        push(name, &format!("ring @_z = cyclic {n}\nideal @_i in @_z = generated {{{g}}}\nring @ = ideal-ring @_i"));
    }
    push("I<M2(Z/2)", &format!("{m2}ideal @_i in @_m = generated {{4}}\nring @ = ideal-ring @_i"));
    push("J<T2(Z/2)", &format!("{t2}ideal @_i in @_t = generated {{1}}\nring @ = ideal-ring @_i"));
    Ok(out)
}
