//! US reassignment and licensing records.
//!
//! The raw field holds one or more records of nine pipe-separated slots:
//! assignee, assignor, assignee date, assignee year, document number,
//! document date, document year, reasons, legal agent. Records are
//! separated by `;;`.

mod parse;
mod resolve;
mod stats;

pub use parse::{
    format_reassignment_field, parse_reassignment_field, ReassignmentEntry, RECORD_DELIMITER, SLOTS,
};
pub use resolve::{
    patent_origins, resolve_events, write_events_csv, AliasMap, TransactionEvent, TransactionKind,
};
pub use stats::{
    licensing_stats, reassignment_stats, transaction_stats, LicenseeRow, LicensingStats,
    LicensorRow, OriginLicensing, OriginReassignment, PairShare, ReassignmentStats, StatsBlock,
    TransactionStats,
};
