//! Presheaves and sheaves on finite sites, the `fgId` presheaf functor, stalks,
//! sheafification, sections over basic opens and gluing of affine charts.

mod basic_open;
mod comparison;
mod gluing;
mod presheaf;
mod sheafify;
mod site;

pub use basic_open::{
    affine_stalk_check, basic_open_check, module_sheaf_check, module_sheaf_tilde, structure_sections_on_basic_open,
    BasicOpenSections, ModuleSection, ModuleSheaf,
};
pub use comparison::{closed_subscheme_comparison, comparison_phi, ComparisonOpen};
pub use gluing::{projective_line_json, trop_scheme, ChartIdentification, GluingData, TropScheme};
pub use presheaf::{fgid_table, fixture_presheaves, phi_presheaf, stalk_commutation_check, PhiPresheaf, RingPresheaf, SemiringPresheaf};
pub use sheafify::{sheaf_axioms_check, sheafification_check, sheafify, Sheafification};
pub use site::FiniteSite;
