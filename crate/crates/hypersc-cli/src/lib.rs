// `!(x > 0.0)`-style guards are intentional: NaN must fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Library side of the `hypersc` command-line tool: file formats, JSON
//! emission, and the command implementations (kept out of `main` so that
//! integration tests and fuzz targets can drive them directly).

pub mod commands;
pub mod formats;
pub mod jsonfmt;
