mod epimorphism;
mod forest;
mod gadget;
mod reduce;
mod state;
mod step;
mod treatment;

pub use epimorphism::{Epimorphism, Step};
pub use forest::{attach_bf, attach_bf2, attach_bf_with, ForestAttachment, PairAttachment, Strategy};
pub use gadget::{build_z4, nonstandard_markers, Gadget};
pub use state::{components_of, Component, Configuration, Invariants};
pub use treatment::{f_treatment, ref_sequence, Elimination, Treatment, TreatmentRecord};
pub use step::{conservative_step, fp_transformation, StepOutcome, StepTrace};
pub use reduce::{
    restrict_to_plain_join, reduce_join_to_rank2, reduce_with, PlainJoinReport, RankSummary, ReduceOptions,
    ReductionInput, ReductionReport,
};
