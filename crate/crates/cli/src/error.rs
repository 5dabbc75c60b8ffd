use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad run document or a suite that does not fit the model.
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Toolkit(#[from] supou::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
