//! Generators, file formats, cross-verification and benchmark reporting.

mod bench;
mod generate;
mod io;
mod rect;
mod sortlb;
mod verify;

pub use bench::{median, run_bench, timed_solve, BenchConfig, BenchRatio, BenchReport, BenchRun};
pub use generate::{generate, sortlb_instance, GenKind, GenParams};
pub use io::{
    format_instance, format_schedule, parse_instance, parse_schedule, read_instance, read_schedule,
    schedule_to_json, write_instance, write_schedule, RecordJson, ScheduleJson,
};
pub use rect::{rect_corners, rect_from_corners, rectangles_from_corners};
pub use sortlb::{
    check_sortlb_schedule, default_sortlb_algorithms, sortlb_check, SortlbOutcome, SortlbReport,
    SORTLB_TOLERANCE,
};
pub use verify::{compare_schedules, verify, Algorithm, VerifyDivergence, VerifyReport, TIME_TOLERANCE};
