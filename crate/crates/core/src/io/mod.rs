//! Configuration text, field dumps, sweep reports and plots.

pub mod config;
pub mod field_csv;
pub mod report;
pub mod svg;

pub use config::{inflation_config_from_entries, inflation_config_to_entries, Config};
pub use field_csv::{
    fmt17, read_field_csv, read_field_csv_file, write_field_csv, write_field_csv_file,
};
pub use report::{
    read_report_rows, report_csv_string, report_plot_svg, write_report, REPORT_COLUMNS,
};
pub use svg::render_loglog_plot;
