//! word2vec text format: an optional `N d` header line, then one
//! `token v1 … vd` line per word, fields separated by single spaces.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{EmbeddingModel, Vocabulary};
use crate::format::sig9;
use crate::linalg::DenseMatrix;
use crate::{Error, Result, Scalar};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads a model in word2vec text format.
///
/// File order is kept as the vocabulary (frequency) order. At most `limit`
/// words are read. Without a header the dimension is taken from the first
/// data line. Trailing whitespace and blank lines are ignored.
pub fn read_word2vec_text<T: Scalar, R: BufRead>(
    mut reader: R,
    limit: Option<usize>,
    header: bool,
) -> Result<EmbeddingModel<T>> {
    let mut lines = Lines {
        reader: &mut reader,
        buf: String::new(),
        line_no: 0,
    };
    let mut declared_rows = None;
    let mut dim = None;
    if header {
        let Some(line) = lines.next_line()? else {
            return Err(parse_err(1, "empty input: missing \"N d\" header"));
        };
        let fields: Vec<&str> = lines.buf.split_whitespace().collect();
        let [n, d] = fields[..] else {
            return Err(parse_err(line, format!("header must be \"N d\", got {:?}", lines.buf.trim_end())));
        };
        let n: usize = n
            .parse()
            .map_err(|_| parse_err(line, format!("bad word count {n:?} in header")))?;
        let d: usize = d
            .parse()
            .map_err(|_| parse_err(line, format!("bad dimension {d:?} in header")))?;
        if d == 0 {
            return Err(parse_err(line, "header declares dimension 0"));
        }
        declared_rows = Some(n);
        dim = Some(d);
    }

    let wanted = match (declared_rows, limit) {
        (Some(n), Some(l)) => Some(n.min(l)),
        (n, l) => n.or(l),
    };
    let mut vocab = Vocabulary::default();
    let mut values: Vec<T> = Vec::new();
    let mut last_line = lines.line_no;

    while wanted.is_none_or(|w| vocab.len() < w) {
        let Some(line) = lines.next_line()? else {
            break;
        };
        last_line = line;
        let text = lines.buf.trim_end();
        let (token, rest) = match text.split_once(' ') {
            Some((t, r)) => (t, r),
            None => return Err(parse_err(line, format!("no values after token {text:?}"))),
        };
        if token.is_empty() {
            return Err(parse_err(line, "line starts with a space (empty token)"));
        }
        let before = values.len();
        for field in rest.split(' ') {
            let v: T = field
                .parse()
                .map_err(|_| parse_err(line, format!("cannot parse {field:?} as a number")))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("non-finite value {field:?}")));
            }
            values.push(v);
        }
        let found = values.len() - before;
        match dim {
            None => dim = Some(found),
            Some(d) if d != found => {
                return Err(Error::DimensionMismatch {
                    line,
                    expected: d,
                    found,
                })
            }
            _ => {}
        }
        vocab.push(token.to_string(), line)?;
    }

    if let (Some(n), Some(w)) = (declared_rows, wanted) {
        if vocab.len() < w {
            return Err(parse_err(
                last_line + 1,
                format!("header declares {n} words but the input ends after {}", vocab.len()),
            ));
        }
    }
    let Some(d) = dim else {
        return Err(parse_err(1, "empty input: no word vectors"));
    };
    let matrix = DenseMatrix::from_vec(vocab.len(), d, values)?;
    EmbeddingModel::new(vocab, matrix)
}

struct Lines<'a, R> {
    reader: &'a mut R,
    buf: String,
    line_no: usize,
}

impl<R: BufRead> Lines<'_, R> {
    /// Advances to the next non-blank line, returning its 1-based number.
    fn next_line(&mut self) -> Result<Option<usize>> {
        loop {
            self.buf.clear();
            self.line_no += 1;
            let line = self.line_no;
            let read = self.reader.read_line(&mut self.buf).map_err(|e| match e.kind() {
                std::io::ErrorKind::InvalidData => parse_err(line, "invalid UTF-8"),
                _ => Error::Io(e),
            })?;
            if read == 0 {
                return Ok(None);
            }
            if !self.buf.trim().is_empty() {
                return Ok(Some(line));
            }
        }
    }
}

pub fn load_word2vec_text<T: Scalar>(
    path: impl AsRef<Path>,
    limit: Option<usize>,
    header: bool,
) -> Result<EmbeddingModel<T>> {
    read_word2vec_text(BufReader::new(File::open(path)?), limit, header)
}

/// Writes a model in word2vec text format, numbers at 9 significant digits.
pub fn write_word2vec_text<T: Scalar, W: Write>(
    model: &EmbeddingModel<T>,
    mut writer: W,
    header: bool,
) -> Result<()> {
    if header {
        writeln!(writer, "{} {}", model.len(), model.dim())?;
    }
    let mut line = String::new();
    for (token, row) in model.vocab().tokens().iter().zip(model.matrix().row_iter()) {
        line.clear();
        line.push_str(token);
        for &v in row {
            line.push(' ');
            line.push_str(&sig9(v.to_f64_lossy()));
        }
        line.push('\n');
        writer.write_all(line.as_bytes())?;
    }
    writer.flush()?;
    Ok(())
}

pub fn save_word2vec_text<T: Scalar>(
    model: &EmbeddingModel<T>,
    path: impl AsRef<Path>,
    header: bool,
) -> Result<()> {
    write_word2vec_text(model, BufWriter::new(File::create(path)?), header)
}
