//! Exact finite rings, their ideals, quotients and morphisms, and the
//! ring-spec language.

mod catalog;
mod ideal;
mod morphism;
mod ring;
mod spec;

pub use catalog::{catalog, catalog_declarations, catalog_ring, unital_catalog};
pub use ideal::{all_ideals, ideal_as_ring, ideal_as_ring_with_embedding, ideal_generated, quotient, subring, Ideal};
pub(crate) use ideal::subset_ring;
pub use morphism::{find_isomorphism, RingMorphism};
pub(crate) use morphism::extend_additive;
pub use ring::{make_cyclic, make_matrix, make_product, unitalize, unitalize_with_exponent, Elem, FiniteRing, RingElement, Structure, STRUCTURED_CAP, TABLE_CAP};
pub use spec::{parse_spec, Env};
