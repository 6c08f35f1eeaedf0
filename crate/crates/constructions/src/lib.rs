//! Graph families, reduction gadgets and graph products for pebble games.

pub mod arith;
pub mod families;
pub mod gadgets;
pub mod handle;
pub mod product;
pub mod xmas;

pub use arith::{ceil_log2, floor_log2, g, g_at_most, g_inv, pyramid_price};
pub use families::{binary_tree, centipede, chain, path, pyramid, pyramid_id, road, teabag, tree_id};
pub use gadgets::{
    clause_gadget, cnf_gadget, conjunction_gadget, existential_gadget, conjunction_weight, literal_gadget, qbf_reduction, quantifier_gadget, universal_gadget, variable_gadget, ClauseParts,
    ConjunctionParts, GadgetBuilder, LiteralParts, QuantifierParts, Reduction, TurnpikeRecord, VariableParts,
};
pub use handle::{parse_anchors, Composer, ConstructionError, GadgetHandle};
pub use product::{cell_id, product_reversible, product_standard, CellPart, PointyLayout, StandardProduct};
pub use xmas::{christmas_layout, christmas_tree, modified_kind, modified_pyramid, mold, turnpike, ModifiedKind};
