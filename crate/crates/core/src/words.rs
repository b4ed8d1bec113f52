//! Words over quiver edges: parsing, cyclic equivalence, periodicity and
//! enumeration of closed paths with prescribed multiplicities.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::SignatureQuiver;

/// Edge of a quiver as far as path combinatorics is concerned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub label: char,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub letters: Vec<char>,
    pub closed: bool,
}

impl Word {
    pub fn new(letters: Vec<char>, closed: bool) -> Self {
        Word { letters, closed }
    }

    pub fn closed(letters: &str) -> Self {
        Word { letters: letters.chars().collect(), closed: true }
    }

    /// Parses `(cadb)^6`, `a^3b^4`, `cadbcdab` or superscripts `(cadb)⁶`.
    pub fn parse(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut p = Parser { chars: &chars, pos: 0 };
        let letters = p.sequence(0)?;
        p.skip_ws();
        if p.pos < chars.len() {
            return Err(p.error("unexpected character"));
        }
        if letters.is_empty() {
            return Err(Error::WordParse { offset: 0, message: "empty word".into() });
        }
        Ok(Word { letters, closed: true })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn rotate(&self, k: usize) -> Word {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let n = letters.len();
            letters.rotate_left(k % n);
        }
        Word { letters, closed: self.closed }
    }

    pub fn pow(&self, m: usize) -> Word {
        Word { letters: self.letters.repeat(m), closed: self.closed }
    }

    pub fn as_string(&self) -> String {
        self.letters.iter().collect()
    }

    /// Applies a letter substitution; letters missing from `map` stay.
    pub fn relabel(&self, map: &BTreeMap<char, char>) -> Word {
        Word {
            letters: self.letters.iter().map(|c| *map.get(c).unwrap_or(c)).collect(),
            closed: self.closed,
        }
    }
}

impl fmt::Display for Word {
    /// Exponent notation: `(cadb)^6`, `a^3b^4c^5d^6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (u, m) = minimal_subword(self);
        if m > 1 && u.len() > 1 {
            write!(f, "({})^{}", runs(&u.letters), m)
        } else {
            f.write_str(&runs(&self.letters))
        }
    }
}

fn runs(letters: &[char]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        out.push(letters[i]);
        if j - i > 1 {
            out.push_str(&format!("^{}", j - i));
        }
        i = j;
    }
    out
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
}

const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::WordParse { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn sequence(&mut self, depth: usize) -> Result<Vec<char>> {
        let mut out = Vec::new();
        loop {
            let item = match self.peek() {
                Some(c) if c.is_ascii_alphabetic() => {
                    self.pos += 1;
                    vec![c]
                }
                Some('(') => {
                    self.pos += 1;
                    let inner = self.sequence(depth + 1)?;
                    if self.peek() != Some(')') {
                        return Err(self.error("missing ')'"));
                    }
                    self.pos += 1;
                    if inner.is_empty() {
                        return Err(self.error("empty group"));
                    }
                    inner
                }
                Some(')') if depth > 0 => return Ok(out),
                None => return Ok(out),
                Some(_) => return Err(self.error("unexpected character")),
            };
            let k = self.exponent()?;
            for _ in 0..k {
                out.extend_from_slice(&item);
            }
        }
    }

    fn exponent(&mut self) -> Result<usize> {
        match self.peek() {
            Some('^') => {
                self.pos += 1;
                self.skip_ws();
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.error("expected exponent"));
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                digits.parse().map_err(|_| self.error("exponent out of range"))
            }
            Some(c) if SUPERSCRIPTS.contains(&c) => {
                let mut k = 0usize;
                while let Some(d) = self.chars.get(self.pos).and_then(|c| SUPERSCRIPTS.iter().position(|s| s == c)) {
                    k = k.checked_mul(10).and_then(|k| k.checked_add(d)).ok_or_else(|| self.error("exponent out of range"))?;
                    self.pos += 1;
                }
                Ok(k)
            }
            _ => Ok(1),
        }
    }
}

/// Least rotation (Booth).
pub fn canonical(w: &Word) -> Result<Word> {
    if !w.closed {
        return Err(Error::NotCyclic("an open word has no rotations".into()));
    }
    Ok(w.rotate(least_rotation(&w.letters)))
}

fn least_rotation(s: &[char]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| s[i % n];
    let mut f = vec![-1i64; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = f[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if sj < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && sj != at(k) {
            if sj < at(k) {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k % n
}

/// Smallest `u` and largest `m` with `w = u^m`.
pub fn minimal_subword(w: &Word) -> (Word, usize) {
    let s = &w.letters;
    let n = s.len();
    if n == 0 {
        return (w.clone(), 1);
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = n - fail[n - 1];
    if n.is_multiple_of(p) {
        (Word { letters: s[..p].to_vec(), closed: w.closed }, n / p)
    } else {
        (w.clone(), 1)
    }
}

pub fn multiplicities(w: &Word) -> BTreeMap<char, u32> {
    let mut out = BTreeMap::new();
    for &c in &w.letters {
        *out.entry(c).or_insert(0) += 1;
    }
    out
}

pub fn compatible(a: &Word, b: &Word) -> bool {
    multiplicities(a) == multiplicities(b)
}

/// Every quiver edge appears at least once.
pub fn is_complete(graph: &[GraphEdge], w: &Word) -> bool {
    let mu = multiplicities(w);
    graph.iter().all(|e| mu.contains_key(&e.label))
}

/// Checks that consecutive letters chain head to tail (and wrap when closed).
pub fn check_path(graph: &[GraphEdge], w: &Word) -> Result<()> {
    let mut edges = Vec::with_capacity(w.len());
    for (i, c) in w.letters.iter().enumerate() {
        match graph.iter().find(|e| e.label == *c) {
            Some(e) => edges.push(*e),
            None => return Err(Error::NotAPath(format!("letter '{c}' at position {i} is not an edge"))),
        }
    }
    for (i, pair) in edges.windows(2).enumerate() {
        if pair[0].to != pair[1].from {
            return Err(Error::NotAPath(format!(
                "'{}' ends at vertex {} but '{}' starts at vertex {}",
                w.letters[i],
                pair[0].to + 1,
                w.letters[i + 1],
                pair[1].from + 1
            )));
        }
    }
    if w.closed {
        if let (Some(first), Some(last)) = (edges.first(), edges.last()) {
            if last.to != first.from {
                return Err(Error::NotAPath(format!(
                    "closing '{}' ends at vertex {} but '{}' starts at vertex {}",
                    w.letters[w.len() - 1],
                    last.to + 1,
                    w.letters[0],
                    first.from + 1
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Enumeration {
    pub words: Vec<Word>,
    pub truncated: bool,
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn resolve(graph: &[GraphEdge], mult: &BTreeMap<char, u32>) -> Result<Vec<u32>> {
    for c in mult.keys() {
        if !graph.iter().any(|e| e.label == *c) {
            return Err(Error::InvalidSpec(format!("no edge labelled '{c}'")));
        }
    }
    Ok(graph.iter().map(|e| mult.get(&e.label).copied().unwrap_or(0)).collect())
}

/// Closed paths using each edge exactly `mult` times, one per rotation class,
/// in lexicographic order of their canonical forms.
pub fn enumerate_words(graph: &[GraphEdge], mult: &BTreeMap<char, u32>, max_results: usize) -> Result<Enumeration> {
    let counts = resolve(graph, mult)?;
    let total: u32 = counts.iter().sum();
    if total == 0 {
        return Ok(Enumeration::default());
    }
    // every class has a rotation starting with its smallest letter
    let first = (0..graph.len()).filter(|&i| counts[i] > 0).min_by_key(|&i| graph[i].label).unwrap();
    let nv = graph.iter().map(|e| e.from.max(e.to)).max().unwrap() + 1;
    let mut st = Search {
        graph,
        remaining: counts.clone(),
        balance: vec![0; nv],
        path: vec![first],
        start: graph[first].from,
        seen: HashSet::new(),
        found: Vec::new(),
        max_results,
        truncated: false,
    };
    st.remaining[first] -= 1;
    for (i, e) in graph.iter().enumerate() {
        st.balance[e.from] += st.remaining[i] as i64;
        st.balance[e.to] -= st.remaining[i] as i64;
    }
    st.dfs(graph[first].to);
    let mut words = st.found;
    words.sort();
    Ok(Enumeration { words, truncated: st.truncated })
}

struct Search<'a> {
    graph: &'a [GraphEdge],
    remaining: Vec<u32>,
    /// out minus in degree of the unused edges, per vertex
    balance: Vec<i64>,
    path: Vec<usize>,
    start: usize,
    seen: HashSet<Vec<char>>,
    found: Vec<Word>,
    max_results: usize,
    truncated: bool,
}

impl Search<'_> {
    fn dfs(&mut self, at: usize) {
        if self.truncated {
            return;
        }
        if self.remaining.iter().all(|&r| r == 0) {
            if at == self.start {
                let w = Word { letters: self.path.iter().map(|&i| self.graph[i].label).collect(), closed: true };
                let c = w.rotate(least_rotation(&w.letters));
                if self.seen.insert(c.letters.clone()) {
                    if self.found.len() == self.max_results {
                        self.truncated = true;
                        return;
                    }
                    self.found.push(c);
                }
            }
            return;
        }
        if !self.feasible(at) {
            return;
        }
        for i in 0..self.graph.len() {
            let e = self.graph[i];
            if self.remaining[i] == 0 || e.from != at {
                continue;
            }
            self.remaining[i] -= 1;
            self.balance[e.from] -= 1;
            self.balance[e.to] += 1;
            self.path.push(i);
            self.dfs(e.to);
            self.path.pop();
            self.balance[e.from] += 1;
            self.balance[e.to] -= 1;
            self.remaining[i] += 1;
            if self.truncated {
                return;
            }
        }
    }

    /// Unused edges must form a connected trail from `at` back to the start.
    fn feasible(&self, at: usize) -> bool {
        for (v, &b) in self.balance.iter().enumerate() {
            let want = (v == at) as i64 - (v == self.start) as i64;
            if b != want {
                return false;
            }
        }
        let n = self.balance.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for (i, e) in self.graph.iter().enumerate() {
            if self.remaining[i] > 0 {
                let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, at);
        self.graph
            .iter()
            .enumerate()
            .filter(|(i, _)| self.remaining[*i] > 0)
            .all(|(_, e)| find(&mut parent, e.from) == root)
    }
}

/// Number of rotation classes of closed paths with the given multiplicities,
/// by Burnside's lemma over the cyclic group.
pub fn count_words(graph: &[GraphEdge], mult: &BTreeMap<char, u32>) -> Result<u128> {
    let counts = resolve(graph, mult)?;
    let k: u32 = counts.iter().sum();
    if k == 0 {
        return Ok(0);
    }
    let g = counts.iter().filter(|&&c| c > 0).fold(0u32, |a, &b| gcd(a, b));
    let mut sum: u128 = 0;
    for t in 1..=g {
        if g % t != 0 {
            continue;
        }
        let reduced: Vec<u32> = counts.iter().map(|&c| c / t).collect();
        let a = rooted_cycles(graph, &reduced)?;
        sum = (euler_phi(t) as u128).checked_mul(a).and_then(|x| x.checked_add(sum)).ok_or(Error::CountOverflow)?;
    }
    Ok(sum / k as u128)
}

/// Linear sequences using the counts exactly that close up as paths.
fn rooted_cycles(graph: &[GraphEdge], counts: &[u32]) -> Result<u128> {
    let mut memo: HashMap<(Vec<u32>, usize), u128> = HashMap::new();
    let mut total: u128 = 0;
    let mut rem = counts.to_vec();
    for i in 0..graph.len() {
        if rem[i] == 0 {
            continue;
        }
        rem[i] -= 1;
        let start = graph[i].from;
        memo.retain(|_, _| false);
        let n = paths_to(graph, &mut rem, graph[i].to, start, &mut memo)?;
        total = total.checked_add(n).ok_or(Error::CountOverflow)?;
        rem[i] += 1;
    }
    Ok(total)
}

fn paths_to(
    graph: &[GraphEdge],
    rem: &mut Vec<u32>,
    at: usize,
    start: usize,
    memo: &mut HashMap<(Vec<u32>, usize), u128>,
) -> Result<u128> {
    if rem.iter().all(|&r| r == 0) {
        return Ok((at == start) as u128);
    }
    let key = (rem.clone(), at);
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let mut total: u128 = 0;
    for i in 0..graph.len() {
        if rem[i] == 0 || graph[i].from != at {
            continue;
        }
        rem[i] -= 1;
        let n = paths_to(graph, rem, graph[i].to, start, memo);
        rem[i] += 1;
        total = total.checked_add(n?).ok_or(Error::CountOverflow)?;
    }
    memo.insert(key, total);
    Ok(total)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u32
}

/// Outcome of the weight test for a closed path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosureTest {
    pub holds: bool,
    /// `Σ μ̃ ω` over the word.
    pub sum: f64,
    pub m: usize,
    pub xi: i64,
    /// `gcd(ξ, m) = 1`.
    pub coprime: bool,
}

/// Tolerance on `|Σ μ̃ ω − 2πξ|`.
pub const CLOSURE_SUM_TOL: f64 = 1e-4;

pub fn closure_test(q: &SignatureQuiver, w: &Word, xi: i64) -> Result<ClosureTest> {
    check_path(&q.graph(), w)?;
    let sum: f64 = w.letters.iter().map(|c| q.edge(*c).map_or(0.0, |e| e.omega)).sum();
    let (_, m) = minimal_subword(w);
    Ok(ClosureTest {
        holds: (sum - 2.0 * std::f64::consts::PI * xi as f64).abs() <= CLOSURE_SUM_TOL,
        sum,
        m,
        xi,
        coprime: gcd(xi.unsigned_abs() as u32, m as u32) == 1,
    })
}

/// Parses `a=1,b=2` or `all=1` against the given edge labels.
pub fn parse_multiplicities(text: &str, labels: &[char]) -> Result<BTreeMap<char, u32>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidSpec(format!("expected letter=count, got '{part}'")))?;
        let v: u32 = v.trim().parse().map_err(|_| Error::InvalidSpec(format!("bad count in '{part}'")))?;
        let k = k.trim();
        if k == "all" {
            for &c in labels {
                out.insert(c, v);
            }
        } else {
            let mut cs = k.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) if c.is_ascii_alphabetic() => {
                    out.insert(c, v);
                }
                _ => return Err(Error::InvalidSpec(format!("bad letter in '{part}'"))),
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loops(k: usize) -> Vec<GraphEdge> {
        (0..k).map(|i| GraphEdge { label: (b'a' + i as u8) as char, from: 0, to: 0 }).collect()
    }

    fn brute_least_rotation(w: &[char]) -> Vec<char> {
        (0..w.len())
            .map(|k| {
                let mut v = w.to_vec();
                v.rotate_left(k);
                v
            })
            .min()
            .unwrap()
    }

    #[test]
    fn parse_and_print() {
        let w = Word::parse("(cadb)^6").unwrap();
        assert_eq!(w.len(), 24);
        assert_eq!(w.to_string(), "(cadb)^6");
        assert_eq!(Word::parse("a^3 b^4 c^5 d^6").unwrap().to_string(), "a^3b^4c^5d^6");
        assert_eq!(Word::parse("(cadb)⁶").unwrap(), w);
        assert_eq!(Word::parse("((ab)^2c)^2").unwrap().as_string(), "ababcababc");
        assert!(matches!(Word::parse("(ab"), Err(Error::WordParse { .. })));
        assert!(matches!(Word::parse("a^"), Err(Error::WordParse { .. })));
        assert!(matches!(Word::parse("a1"), Err(Error::WordParse { offset: 1, .. })));
    }

    #[test]
    fn booth_matches_brute_force() {
        for s in ["dbca", "adbc", "abab", "bbbab", "cbdacacccbda", "aaaa", "baabaaab", "z"] {
            let w = Word::closed(s);
            assert_eq!(canonical(&w).unwrap().letters, brute_least_rotation(&w.letters), "{s}");
        }
        assert_eq!(canonical(&Word::closed("dbca")).unwrap().as_string(), "adbc");
        assert!(matches!(canonical(&Word::new(vec!['a'], false)), Err(Error::NotCyclic(_))));
    }

    #[test]
    fn subwords() {
        let (u, m) = minimal_subword(&Word::parse("(cadb)^6").unwrap());
        assert_eq!((u.as_string().as_str(), m), ("cadb", 6));
        let (u, m) = minimal_subword(&Word::parse("(cadbcdabcadb)^2").unwrap());
        assert_eq!((u.as_string().as_str(), m), ("cadbcdabcadb", 2));
        let (u, m) = minimal_subword(&Word::closed("cadbcdabcdabcadbcadbcdab"));
        assert_eq!((u.len(), m), (24, 1));
    }

    #[test]
    fn multiplicity_counts() {
        let mu = multiplicities(&Word::parse("(cbdacacccbda)^2").unwrap());
        assert_eq!(mu, BTreeMap::from([('a', 6), ('b', 4), ('c', 10), ('d', 4)]));
        assert!(compatible(&Word::parse("(cadb)^6").unwrap(), &Word::parse("(cdab)^6").unwrap()));
        assert!(!compatible(&Word::parse("(cadb)^6").unwrap(), &Word::parse("(cbdacacccbda)^2").unwrap()));
    }

    #[test]
    fn four_loops_give_six_classes() {
        let g = loops(4);
        let mult = parse_multiplicities("all=1", &['a', 'b', 'c', 'd']).unwrap();
        let e = enumerate_words(&g, &mult, 100).unwrap();
        assert_eq!(e.words.len(), 6);
        assert!(!e.truncated);
        assert_eq!(count_words(&g, &mult).unwrap(), 6);
        let e = enumerate_words(&g, &mult, 4).unwrap();
        assert_eq!(e.words.len(), 4);
        assert!(e.truncated);
    }

    #[test]
    fn burnside_matches_enumeration() {
        let g = loops(3);
        for m in [[2, 2, 0], [2, 1, 1], [3, 3, 3], [4, 2, 2], [1, 1, 1]] {
            let mult: BTreeMap<char, u32> = ['a', 'b', 'c'].into_iter().zip(m).collect();
            let e = enumerate_words(&g, &mult, 100_000).unwrap();
            assert_eq!(count_words(&g, &mult).unwrap(), e.words.len() as u128, "{m:?}");
        }
    }

    #[test]
    fn path_checks() {
        let g = vec![
            GraphEdge { label: 'a', from: 0, to: 1 },
            GraphEdge { label: 'b', from: 1, to: 0 },
            GraphEdge { label: 'c', from: 1, to: 1 },
        ];
        assert!(check_path(&g, &Word::closed("acb")).is_ok());
        assert!(check_path(&g, &Word::closed("ab c a")).is_err());
        assert!(matches!(check_path(&g, &Word::closed("aa")), Err(Error::NotAPath(_))));
        assert!(matches!(check_path(&g, &Word::closed("ac")), Err(Error::NotAPath(_))));
        assert!(check_path(&g, &Word::new(vec!['a', 'c'], false)).is_ok());
        let mult = BTreeMap::from([('a', 2), ('b', 2), ('c', 1)]);
        let e = enumerate_words(&g, &mult, 10).unwrap();
        assert_eq!(e.words.iter().map(|w| w.as_string()).collect::<Vec<_>>(), vec!["abacb"]);
        assert_eq!(count_words(&g, &mult).unwrap(), 1);
        assert!(enumerate_words(&g, &BTreeMap::from([('a', 1)]), 10).unwrap().words.is_empty());
    }
}
