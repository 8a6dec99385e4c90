//! Congruence operators, the `f̂` map, CBS-sequences and the CBS verdicts.

mod operator;
mod presheaf;
mod property;
mod sequence;

pub use operator::{k_morphism_witness, operator_eval, OperatorKind};
pub use presheaf::{presheaf_check, ConditionResult, PresheafOptions, PresheafReport, Violation};
pub use property::{
    cbs1_definition_check, cbs_complete_check, cbs_property_check, k_infimum, Attempt,
    CbsCompleteReport, CbsPropertyVerdict, Certificate, CompleteVerdict, Corresp,
    DefinitionVerdict, IsoChain, PartnerResult, PropertyFailure, SelfQuotient,
};
pub use sequence::{
    cbs_sequence, f_hat, sequence_law_failures, sigma_bracket, CbsSequenceState,
    ComplementChoice, Fhat, DEFAULT_BOUND,
};
