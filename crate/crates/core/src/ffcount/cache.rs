//! On-disk cache of counts and character sums.
//!
//! Layout of the cache directory:
//!
//! - `records.jsonl`: one `{key, kind, m, value}` object per line.
//! - `access.log`: one key per line, appended on every read or write; the
//!   last occurrence orders keys for eviction.
//! - `pins/*.keys`: keys referenced by running processes, never evicted.

use std::collections::{HashMap, HashSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

const RECORDS: &str = "records.jsonl";
const ACCESS: &str = "access.log";
const PINS: &str = "pins";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Count,
    Charsum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RecordValue {
    Count(String),
    Charsum(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    pub kind: RecordKind,
    pub m: u32,
    pub value: RecordValue,
}

impl CacheRecord {
    pub fn count(key: String, m: u32, n: &BigInt) -> Self {
        CacheRecord { key, kind: RecordKind::Count, m, value: RecordValue::Count(n.to_string()) }
    }

    pub fn charsum(key: String, m: u32, coeffs: &[BigInt]) -> Self {
        CacheRecord {
            key,
            kind: RecordKind::Charsum,
            m,
            value: RecordValue::Charsum(coeffs.iter().map(|c| c.to_string()).collect()),
        }
    }

    pub fn as_count(&self) -> Option<BigInt> {
        match &self.value {
            RecordValue::Count(s) => s.parse().ok(),
            RecordValue::Charsum(_) => None,
        }
    }

    pub fn as_coeffs(&self) -> Option<Vec<BigInt>> {
        match &self.value {
            RecordValue::Charsum(v) => v.iter().map(|s| s.parse().ok()).collect(),
            RecordValue::Count(_) => None,
        }
    }
}

/// Hex SHA-256 of a canonical description of a computation.
pub fn content_key(parts: &[(&str, String)]) -> String {
    let mut h = Sha256::new();
    for (name, value) in parts {
        h.update(name.as_bytes());
        h.update(b"=");
        h.update(value.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

static PIN_SEQ: AtomicU64 = AtomicU64::new(0);

/// A handle on a cache directory held by one process.
pub struct Cache {
    dir: PathBuf,
    records: Mutex<HashMap<String, CacheRecord>>,
    pin_file: PathBuf,
    pinned: Mutex<HashSet<String>>,
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(dir.join(PINS))?;
        let records = read_records(&dir)?.into_iter().map(|r| (r.key.clone(), r)).collect();
        let pin_file = dir.join(PINS).join(format!(
            "{}-{}.keys",
            std::process::id(),
            PIN_SEQ.fetch_add(1, Ordering::Relaxed)
        ));
        File::create(&pin_file)?;
        Ok(Cache {
            dir,
            records: Mutex::new(records),
            pin_file,
            pinned: Mutex::new(HashSet::new()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn get(&self, key: &str) -> Result<Option<CacheRecord>> {
        let hit = self.records.lock().unwrap().get(key).cloned();
        if hit.is_some() {
            self.touch(key)?;
        }
        Ok(hit)
    }

    pub fn put(&self, record: CacheRecord) -> Result<()> {
        let mut line = serde_json::to_string(&record).map_err(|e| Error::Data(e.to_string()))?;
        line.push('\n');
        {
            let mut records = self.records.lock().unwrap();
            if records.contains_key(&record.key) {
                drop(records);
                return self.touch(&record.key);
            }
            let mut f = OpenOptions::new().create(true).append(true).open(self.dir.join(RECORDS))?;
            f.write_all(line.as_bytes())?;
            records.insert(record.key.clone(), record.clone());
        }
        self.touch(&record.key)
    }

    fn touch(&self, key: &str) -> Result<()> {
        let mut pinned = self.pinned.lock().unwrap();
        if pinned.insert(key.to_string()) {
            let mut f = OpenOptions::new().append(true).create(true).open(&self.pin_file)?;
            writeln!(f, "{key}")?;
        }
        let mut f = OpenOptions::new().create(true).append(true).open(self.dir.join(ACCESS))?;
        writeln!(f, "{key}")?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Drop for Cache {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.pin_file);
    }
}

fn read_records(dir: &Path) -> Result<Vec<CacheRecord>> {
    let path = dir.join(RECORDS);
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (i, line) in BufReader::new(File::open(&path)?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CacheRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Data(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

fn pid_alive(pid: u32) -> bool {
    if cfg!(target_os = "linux") {
        Path::new(&format!("/proc/{pid}")).exists()
    } else {
        true
    }
}

/// Keys listed in pin files of live processes. Pin files left behind by
/// dead processes are removed.
fn pinned_keys(dir: &Path) -> Result<HashSet<String>> {
    let mut keys = HashSet::new();
    let pins = dir.join(PINS);
    if !pins.exists() {
        return Ok(keys);
    }
    for entry in fs::read_dir(&pins)? {
        let path = entry?.path();
        let Some(name) = path.file_name().and_then(|s| s.to_str()) else { continue };
        let pid = name.split('-').next().and_then(|s| s.parse::<u32>().ok());
        if let Some(pid) = pid {
            if pid != std::process::id() && !pid_alive(pid) {
                let _ = fs::remove_file(&path);
                continue;
            }
        }
        let text = fs::read_to_string(&path).unwrap_or_default();
        keys.extend(text.lines().filter(|l| !l.is_empty()).map(str::to_string));
    }
    Ok(keys)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcSummary {
    pub bytes_before: u64,
    pub bytes_after: u64,
    pub evicted: Vec<String>,
    pub kept: usize,
    /// Pinned records that would otherwise have been evicted.
    pub pinned_retained: usize,
}

/// Shrinks `records.jsonl` to at most `max_bytes` by evicting least recently
/// used records; `evicted` lists keys in eviction order. Pinned records
/// always stay, even if that leaves the file over the limit.
pub fn cache_gc(dir: impl AsRef<Path>, max_bytes: u64) -> Result<GcSummary> {
    let dir = dir.as_ref();
    let records = read_records(dir)?;
    let pinned = pinned_keys(dir)?;
    let mut last_access: HashMap<String, usize> = HashMap::new();
    let access_path = dir.join(ACCESS);
    if access_path.exists() {
        for (i, line) in BufReader::new(File::open(&access_path)?).lines().enumerate() {
            last_access.insert(line?, i);
        }
    }
    let sized: Vec<(CacheRecord, u64)> = records
        .into_iter()
        .map(|r| {
            let len = serde_json::to_string(&r).map(|s| s.len() as u64 + 1).unwrap_or(0);
            (r, len)
        })
        .collect();
    let bytes_before: u64 = sized.iter().map(|(_, l)| l).sum();
    // oldest first; records never accessed count as oldest, in file order
    let mut order: Vec<usize> = (0..sized.len()).collect();
    order.sort_by_key(|&i| (last_access.get(&sized[i].0.key).map_or(0, |a| a + 1), i));
    let mut evict = vec![false; sized.len()];
    let mut evicted = Vec::new();
    let mut total = bytes_before;
    let mut pinned_retained = 0;
    for &i in &order {
        if total <= max_bytes {
            break;
        }
        if pinned.contains(&sized[i].0.key) {
            pinned_retained += 1;
            continue;
        }
        evict[i] = true;
        evicted.push(sized[i].0.key.clone());
        total -= sized[i].1;
    }
    let mut body = String::new();
    let mut kept_keys = HashSet::new();
    for (i, (r, _)) in sized.iter().enumerate() {
        if !evict[i] {
            body.push_str(&serde_json::to_string(r).map_err(|e| Error::Data(e.to_string()))?);
            body.push('\n');
            kept_keys.insert(r.key.clone());
        }
    }
    let tmp = dir.join(format!("{RECORDS}.tmp"));
    fs::write(&tmp, body)?;
    fs::rename(&tmp, dir.join(RECORDS))?;
    // compact the access log to one line per surviving key, in access order
    let mut survivors: Vec<(&String, &usize)> =
        last_access.iter().filter(|(k, _)| kept_keys.contains(*k)).collect();
    survivors.sort_by_key(|(_, &i)| i);
    let log: String = survivors.iter().map(|(k, _)| format!("{k}\n")).collect();
    let tmp = dir.join(format!("{ACCESS}.tmp"));
    fs::write(&tmp, log)?;
    fs::rename(&tmp, &access_path)?;
    Ok(GcSummary { bytes_before, bytes_after: total, evicted, kept: kept_keys.len(), pinned_retained })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(i: u32) -> CacheRecord {
        CacheRecord::count(content_key(&[("i", i.to_string())]), 1, &BigInt::from(i))
    }

    #[test]
    fn roundtrip_and_reopen() {
        let dir = tempfile::tempdir().unwrap();
        {
            let c = Cache::open(dir.path()).unwrap();
            c.put(rec(1)).unwrap();
            c.put(rec(1)).unwrap();
            c.put(CacheRecord::charsum("k".into(), 2, &[BigInt::from(-3), BigInt::from(7)])).unwrap();
        }
        let c = Cache::open(dir.path()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.get(&rec(1).key).unwrap().unwrap().as_count(), Some(BigInt::from(1)));
        let cs = c.get("k").unwrap().unwrap();
        assert_eq!(cs.as_coeffs().unwrap(), vec![BigInt::from(-3), BigInt::from(7)]);
        let line = fs::read_to_string(dir.path().join(RECORDS)).unwrap();
        assert!(line.contains(r#""value":["-3","7"]"#));
    }

    #[test]
    fn gc_evicts_least_recent_and_spares_pins() {
        let dir = tempfile::tempdir().unwrap();
        {
            let c = Cache::open(dir.path()).unwrap();
            for i in 0..4 {
                c.put(rec(i)).unwrap();
            }
            c.get(&rec(0).key).unwrap();
        }
        let s = cache_gc(dir.path(), 0).unwrap();
        assert_eq!(s.evicted, vec![rec(1).key, rec(2).key, rec(3).key, rec(0).key]);
        assert_eq!(s.kept, 0);

        let c = Cache::open(dir.path()).unwrap();
        for i in 0..3 {
            c.put(rec(i)).unwrap();
        }
        let one_record = serde_json::to_string(&rec(0)).unwrap().len() as u64 + 1;
        // `c` is alive, so all three keys are pinned
        let s = cache_gc(dir.path(), one_record).unwrap();
        assert!(s.evicted.is_empty());
        assert_eq!(s.kept, 3);
        drop(c);
        let s = cache_gc(dir.path(), one_record).unwrap();
        assert_eq!(s.evicted, vec![rec(0).key, rec(1).key]);
        assert_eq!(s.kept, 1);
    }
}
