use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated a precondition (empty input, bad length, unknown name, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A coordinate fell outside the interval on which a generator (or its
    /// embedding) is defined.
    #[error("{}", domain_message(.generator, *.point, *.coordinate, *.value, .space))]
    Domain {
        generator: String,
        /// Row of the offending point, when the check ran over a point set.
        point: Option<usize>,
        coordinate: usize,
        value: f64,
        space: Space,
    },

    /// A numerical procedure produced a non-finite or degenerate result.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Which coordinate system a domain check ran in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// The generator's own domain.
    Original,
    /// The range of the embedding `h`.
    Embedded,
}

fn domain_message(
    generator: &str,
    point: Option<usize>,
    coordinate: usize,
    value: f64,
    space: &Space,
) -> String {
    let what = match space {
        Space::Original => "domain",
        Space::Embedded => "embedded range",
    };
    match point {
        Some(row) => format!(
            "domain error: point {row}, coordinate {coordinate} = {value} lies outside the {what} of generator `{generator}`"
        ),
        None => format!(
            "domain error: coordinate {coordinate} = {value} lies outside the {what} of generator `{generator}`"
        ),
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Attaches a point (row) index to a domain error; other variants pass through.
    pub fn at_point(self, row: usize) -> Self {
        match self {
            Error::Domain {
                generator,
                coordinate,
                value,
                space,
                ..
            } => Error::Domain {
                generator,
                point: Some(row),
                coordinate,
                value,
                space,
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
