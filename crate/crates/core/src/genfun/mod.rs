//! Truncated generating series: hypergeometric `F` series, tau functions,
//! single-branch generators, Hirota checks and matrix-integral layouts.

pub mod content;
pub mod fseries;
pub mod hirota;
pub mod layouts;
pub mod series;
pub mod tau;

pub use content::ContentFunction;
pub use fseries::{f_series, FForm, FSeriesSpec, HyperParam, ParamValue};
pub use hirota::{verify_hirota_elementary, HirotaReport};
pub use layouts::{
    evaluate_proposition, parse_layout_name, proposition_series, Ensemble, Integrand, IntegralLayout,
    PropositionSeries, Signature, Slot,
};
pub use series::{FoldValue, ProfileSeries, SeriesKey};
pub use tau::{
    bkp_exponential_check, bkp_product_form_check, hyp_tau, single_branch_generator, tau1_bkp, tau1_tl,
    unbranched_gen, TauKind,
};
