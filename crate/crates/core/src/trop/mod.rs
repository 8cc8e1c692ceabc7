//! The functors `fgId` and `fgMod`, universal valuations, and the ideal correspondence.

mod correspondence;
mod fgid;
mod fgmod;
mod valuation;

pub use correspondence::{
    correspondence_backward, correspondence_check, correspondence_forward, fgid_carrier, handle_json,
    handle_sum, integer_candidates, is_realization, kideal_product, kideal_product_cross_check,
    literal_is_primary, literal_is_prime, module_backward, module_correspondence_check, module_forward,
    natgcd_isomorphism_check, random_member, KIdealHandle, SubmoduleHandle,
};
pub use fgid::{fgid_functor, u_r, FgIdMorphism, FgIdSemiring};
pub use fgmod::{
    check_module_seminorm, hermite_normal_form, module_action, module_action_with, FgModSemimodule, Submodule,
};
pub use valuation::{
    check_seminorm, induced_vhat, random_presentation, universal_property_check, InducedMorphism, Target,
    TargetElem, ValuationData, ValueMap,
};
