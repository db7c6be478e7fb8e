use std::process::ExitCode;

use cubic_euclid::Error;

/// Process outcome. The numeric codes are part of the interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Success: Euclidean, certificate verified, report produced (0).
    Ok,
    /// Internal fault or I/O failure (1).
    Fault,
    /// Invalid input or unparsable file (2).
    Invalid,
    /// Class number undecided (3).
    Undecided,
    /// Class number greater than one (4).
    NotClassNumberOne,
    /// No admissible prime below the cutoff (5).
    Exhausted,
    /// Certificate failed verification (6).
    VerifyFailed,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Ok => 0,
            Outcome::Fault => 1,
            Outcome::Invalid => 2,
            Outcome::Undecided => 3,
            Outcome::NotClassNumberOne => 4,
            Outcome::Exhausted => 5,
            Outcome::VerifyFailed => 6,
        }
    }

    /// Classify a library error: bad input versus internal fault.
    pub fn for_error(e: &Error) -> Outcome {
        match e {
            Error::Stage { source, .. } => Outcome::for_error(source),
            Error::Parse { .. }
            | Error::InvalidConductor(..)
            | Error::InvalidModulus(_)
            | Error::NotAField(_)
            | Error::NotCyclic(..)
            | Error::NotIntegral(_)
            | Error::UnsupportedModulus(_) => Outcome::Invalid,
            // the unit search gave up, so h is not decided
            Error::InsufficientEffort(_) => Outcome::Undecided,
            _ => Outcome::Fault,
        }
    }
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> ExitCode {
        ExitCode::from(o.code())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_stable() {
        let all = [
            Outcome::Ok,
            Outcome::Fault,
            Outcome::Invalid,
            Outcome::Undecided,
            Outcome::NotClassNumberOne,
            Outcome::Exhausted,
            Outcome::VerifyFailed,
        ];
        let codes: Vec<u8> = all.iter().map(|o| o.code()).collect();
        assert_eq!(codes, vec![0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn parse_errors_are_invalid_input() {
        let e = Error::Stage {
            stage: "build",
            source: Box::new(Error::NotCyclic("x^3-2".into(), "-108".into())),
        };
        assert_eq!(Outcome::for_error(&e), Outcome::Invalid);
        assert_eq!(
            Outcome::for_error(&Error::Internal("x".into())),
            Outcome::Fault
        );
        assert_eq!(
            Outcome::for_error(&Error::InsufficientEffort(1.0)),
            Outcome::Undecided
        );
    }
}
