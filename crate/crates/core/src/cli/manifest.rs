use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use walkdir::WalkDir;

use crate::error::{Error, Result};

#[derive(Serialize)]
struct Manifest {
    version: &'static str,
    command: String,
    corpus: Vec<FileHash>,
    outputs: Vec<FileHash>,
}

#[derive(Serialize)]
struct FileHash {
    path: String,
    sha256: String,
}

fn sha256(path: &Path) -> Result<String> {
    let mut file = std::fs::File::open(path).map_err(|e| Error::file(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(|e| Error::file(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

fn hash_entry(path: &Path, base: &Path) -> Result<FileHash> {
    let shown = path.strip_prefix(base).unwrap_or(path);
    Ok(FileHash {
        path: shown.display().to_string(),
        sha256: sha256(path)?,
    })
}

/// Records the input corpus and output files with their SHA-256 digests.
pub fn write_manifest(
    path: &Path,
    command: &str,
    corpus: &Path,
    outputs: &[PathBuf],
) -> Result<()> {
    let corpus_files: Vec<PathBuf> = if corpus.is_dir() {
        let mut files: Vec<PathBuf> = WalkDir::new(corpus)
            .into_iter()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_type().is_file())
            .map(|e| e.into_path())
            .collect();
        files.sort();
        files
    } else {
        vec![corpus.to_path_buf()]
    };
    let corpus_base = if corpus.is_dir() {
        corpus
    } else {
        corpus.parent().unwrap_or(corpus)
    };
    let out_base = path.parent().unwrap_or(Path::new(""));
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        corpus: corpus_files
            .iter()
            .map(|p| hash_entry(p, corpus_base))
            .collect::<Result<_>>()?,
        outputs: outputs
            .iter()
            .map(|p| hash_entry(p, out_base))
            .collect::<Result<_>>()?,
    };
    let text = toml::to_string(&manifest).expect("manifest serializes");
    std::fs::write(path, text).map_err(|e| Error::file(path, e))
}
