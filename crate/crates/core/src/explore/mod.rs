//! Parameter-space exploration of the four-parameter family: slice scans,
//! witness extremisation, incomplete-set scans and the multipartite
//! comparison, plus CSV/JSON output.

pub mod config;
pub mod incomplete;
pub mod multi;
pub mod nelder_mead;
pub mod optimize;
pub mod output;
pub mod scan;

pub use config::{ExplorerConfig, SearchBox};
pub use incomplete::{incomplete_scan, incomplete_scan_default, IncompleteReport, SubsetPolicy};
pub use multi::{multi_compare, Cut, MultiReport};
pub use optimize::{optimize_extreme, optimize_witness, project, OptimizeResult};
pub use output::{format_g, records_to_csv, write_csv, write_json, CSV_HEADER};
pub use scan::{scan_slice, ScanRecord, Slice};
