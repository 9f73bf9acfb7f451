//! On-disk blob cache: one file per key, named by the SHA-256 of the key.
//!
//! File layout: magic, format version (u32 LE), payload length (u64 LE),
//! SHA-256 of the payload, payload.
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use glcoh::cohomology::BlobStore;
use sha2::{Digest, Sha256};

pub const MAGIC: &[u8; 4] = b"GLCB";
pub const VERSION: u32 = 1;
const HEADER: usize = 4 + 4 + 8 + 32;

pub struct DiskStore {
    dir: PathBuf,
    version: u32,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub entries: usize,
    pub bytes: u64,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl DiskStore {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        Self::with_version(dir, VERSION)
    }

    pub fn with_version(dir: impl Into<PathBuf>, version: u32) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DiskStore { dir, version })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_of(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.bin", hex(&Sha256::digest(key.as_bytes()))))
    }

    fn encode(&self, payload: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER + payload.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&self.version.to_le_bytes());
        out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        out.extend_from_slice(&Sha256::digest(payload));
        out.extend_from_slice(payload);
        out
    }

    fn decode(&self, bytes: &[u8]) -> Result<Vec<u8>, String> {
        if bytes.len() < HEADER || &bytes[..4] != MAGIC {
            return Err("bad magic".into());
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
        if version != self.version {
            return Err(format!("version {version}, expected {}", self.version));
        }
        let len = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
        let payload = &bytes[HEADER..];
        if payload.len() != len || Sha256::digest(payload).as_slice() != &bytes[16..48] {
            return Err("checksum mismatch".into());
        }
        Ok(payload.to_vec())
    }

    pub fn get_bytes(&self, key: &str) -> Option<Vec<u8>> {
        let path = self.path_of(key);
        let bytes = fs::read(&path).ok()?;
        match self.decode(&bytes) {
            Ok(p) => Some(p),
            Err(why) => {
                eprintln!("warning: discarding cache entry {} ({why}); recomputing", path.display());
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    /// Writes through a temporary file and a rename.
    pub fn put_bytes(&self, key: &str, payload: &[u8]) -> std::io::Result<()> {
        let path = self.path_of(key);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&self.encode(payload))?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }

    fn entries(&self) -> std::io::Result<Vec<PathBuf>> {
        let mut out = Vec::new();
        for e in fs::read_dir(&self.dir)? {
            let path = e?.path();
            if path.extension().is_some_and(|x| x == "bin") {
                out.push(path);
            }
        }
        Ok(out)
    }

    pub fn stats(&self) -> std::io::Result<Stats> {
        let mut s = Stats::default();
        for p in self.entries()? {
            s.entries += 1;
            s.bytes += fs::metadata(&p)?.len();
        }
        Ok(s)
    }

    pub fn clear(&self) -> std::io::Result<usize> {
        let entries = self.entries()?;
        for p in &entries {
            fs::remove_file(p)?;
        }
        Ok(entries.len())
    }
}

impl BlobStore for DiskStore {
    fn get(&self, key: &str) -> Option<Vec<u8>> {
        self.get_bytes(key)
    }

    fn put(&self, key: &str, bytes: &[u8]) {
        if let Err(e) = self.put_bytes(key, bytes) {
            eprintln!("warning: could not write cache entry for {key}: {e}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let s = DiskStore::open(dir.path()).unwrap();
        let data: Vec<u8> = (0..=255).collect();
        s.put_bytes("k", &data).unwrap();
        assert_eq!(s.get_bytes("k").unwrap(), data);
        assert_eq!(s.get_bytes("other"), None);
        assert_eq!(s.stats().unwrap().entries, 1);
        assert_eq!(s.clear().unwrap(), 1);
        assert_eq!(s.get_bytes("k"), None);
    }

    #[test]
    fn corruption_is_detected_and_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let s = DiskStore::open(dir.path()).unwrap();
        s.put_bytes("k", b"payload").unwrap();
        let path = s.path_of("k");
        let mut bytes = fs::read(&path).unwrap();
        *bytes.last_mut().unwrap() ^= 1;
        fs::write(&path, bytes).unwrap();
        assert_eq!(s.get_bytes("k"), None);
        assert!(!path.exists());
    }

    #[test]
    fn version_bump_invalidates() {
        let dir = tempfile::tempdir().unwrap();
        DiskStore::open(dir.path()).unwrap().put_bytes("k", b"x").unwrap();
        assert_eq!(DiskStore::with_version(dir.path(), VERSION + 1).unwrap().get_bytes("k"), None);
    }
}
