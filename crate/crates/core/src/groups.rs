//! Finite groups carried by explicit Cayley tables.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word in the generators: `(generator position, ±1)` letters read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub letters: Vec<(usize, i8)>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(gen: usize) -> Self {
        Word {
            letters: vec![(gen, 1)],
        }
    }

    /// Expands `(gen, k)` pairs into `|k|` letters each.
    pub fn from_powers(powers: &[(usize, i64)]) -> Self {
        let mut letters = Vec::new();
        for &(g, k) in powers {
            let e = if k < 0 { -1 } else { 1 };
            letters.extend(std::iter::repeat_n((g, e), k.unsigned_abs() as usize));
        }
        Word { letters }
    }

    pub fn power(gen: usize, k: i64) -> Self {
        Self::from_powers(&[(gen, k)])
    }

    /// `x y x⁻¹ y⁻¹` for generators `x`, `y`.
    pub fn commutator(x: usize, y: usize) -> Self {
        Word {
            letters: vec![(x, 1), (y, 1), (x, -1), (y, -1)],
        }
    }

    pub fn inverse(&self) -> Self {
        Word {
            letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Renames generator positions through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Self {
        Word {
            letters: self.letters.iter().map(|&(g, e)| (map(g), e)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub element: usize,
}

/// A finite group with a fixed element numbering.
///
/// `cayley[g][h]` is the index of `g·h`. The table is the ground truth; the
/// relators are checked against it at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteGroup {
    name: String,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

impl FiniteGroup {
    /// Validates the table, the generators and the relators.
    pub fn new(
        name: impl Into<String>,
        cayley: Vec<Vec<usize>>,
        generators: Vec<Generator>,
        relators: Vec<Word>,
    ) -> Result<Self> {
        let n = cayley.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty Cayley table".into()));
        }
        if cayley
            .iter()
            .any(|row| row.len() != n || row.iter().any(|&x| x >= n))
        {
            return Err(Error::InvalidGroup(
                "Cayley table is not a square table of element indices".into(),
            ));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| cayley[e][g] == g && cayley[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            let h = (0..n)
                .find(|&h| cayley[g][h] == identity && cayley[h][g] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
            inverse[g] = h;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = cayley[a][b];
                for c in 0..n {
                    if cayley[ab][c] != cayley[a][cayley[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        if let Some(g) = generators.iter().find(|g| g.element >= n) {
            return Err(Error::InvalidGroup(format!(
                "generator {} is out of range",
                g.name
            )));
        }
        let group = FiniteGroup {
            name: name.into(),
            cayley,
            identity,
            inverse,
            generators,
            relators,
        };
        if group.closure(&group.generator_elements()).len() != n {
            return Err(Error::InvalidGroup(
                "generators do not generate the group".into(),
            ));
        }
        for (k, w) in group.relators.iter().enumerate() {
            if w.letters
                .iter()
                .any(|&(g, e)| g >= group.generators.len() || (e != 1 && e != -1))
            {
                return Err(Error::InvalidGroup(format!(
                    "relator {k} uses an invalid letter"
                )));
            }
            if group.evaluate_word(w) != group.identity {
                return Err(Error::InvalidGroup(format!(
                    "relator {k} does not evaluate to the identity"
                )));
            }
        }
        Ok(group)
    }

    /// Builds a group from its table and generating elements, deriving a
    /// presentation from a spanning tree of the Cayley graph.
    pub fn from_cayley_table(
        name: impl Into<String>,
        cayley: Vec<Vec<usize>>,
        generators: Vec<Generator>,
    ) -> Result<Self> {
        let provisional = FiniteGroup::new(name, cayley, generators, Vec::new())?;
        let relators = provisional.spanning_tree_relators();
        Ok(FiniteGroup {
            relators,
            ..provisional
        })
    }

    /// The trivial group, with no generators.
    pub fn trivial() -> Self {
        FiniteGroup {
            name: "C1".into(),
            cayley: vec![vec![0]],
            identity: 0,
            inverse: vec![0],
            generators: Vec::new(),
            relators: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.cayley.len()
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.cayley[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn pow(&self, g: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(g) } else { g };
        (0..k.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_elements(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.element).collect()
    }

    pub fn generator_position(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|g| self.elements().all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    pub fn involutions(&self) -> Vec<usize> {
        self.elements()
            .filter(|&g| g != self.identity && self.mul(g, g) == self.identity)
            .collect()
    }

    pub fn evaluate_word(&self, w: &Word) -> usize {
        w.letters.iter().fold(self.identity, |acc, &(g, e)| {
            let x = self.generators[g].element;
            self.mul(acc, if e > 0 { x } else { self.inv(x) })
        })
    }

    /// Appends a relator, which must already hold in the group.
    pub fn with_relator(&self, w: Word) -> Result<Self> {
        if w.letters.iter().any(|&(g, _)| g >= self.generators.len()) {
            return Err(Error::InvalidGroup(
                "relator uses an unknown generator".into(),
            ));
        }
        if self.evaluate_word(&w) != self.identity {
            return Err(Error::InvalidGroup("appended relator does not hold".into()));
        }
        let mut out = self.clone();
        out.relators.push(w);
        Ok(out)
    }

    /// Subgroup generated by `elements`, sorted ascending.
    pub fn closure(&self, elements: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in elements {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        self.elements().filter(|&x| seen[x]).collect()
    }

    /// All subgroups as sorted element lists, smallest first.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: Vec<Vec<usize>> = Vec::new();
        for g in self.elements() {
            let c = self.closure(&[g]);
            if !found.contains(&c) {
                found.push(c);
            }
        }
        // every subgroup is a join of cyclic ones
        let mut i = 0;
        while i < found.len() {
            for j in 0..i {
                let mut gens = found[i].clone();
                gens.extend_from_slice(&found[j]);
                let c = self.closure(&gens);
                if !found.contains(&c) {
                    found.push(c);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        found
    }

    /// Shortest positive word in the generators for every element.
    pub fn element_words(&self) -> Vec<Word> {
        let mut words: Vec<Option<Word>> = vec![None; self.order()];
        words[self.identity] = Some(Word::empty());
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (k, g) in self.generators.iter().enumerate() {
                let y = self.mul(x, g.element);
                if words[y].is_none() {
                    let w = words[x].as_ref().expect("visited").concat(&Word::letter(k));
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        words
            .into_iter()
            .map(|w| w.expect("generators generate"))
            .collect()
    }

    fn spanning_tree_relators(&self) -> Vec<Word> {
        let words = self.element_words();
        let mut tree_edges = std::collections::HashSet::new();
        for (y, w) in words.iter().enumerate() {
            if let Some(&(k, _)) = w.letters.last() {
                let x = self.mul(y, self.inv(self.generators[k].element));
                tree_edges.insert((x, k));
            }
        }
        let mut relators = Vec::new();
        for x in self.elements() {
            for (k, g) in self.generators.iter().enumerate() {
                if tree_edges.contains(&(x, k)) {
                    continue;
                }
                let y = self.mul(x, g.element);
                relators.push(
                    words[x]
                        .concat(&Word::letter(k))
                        .concat(&words[y].inverse()),
                );
            }
        }
        relators
    }

    /// The subgroup on `elements` as a group in its own right, together with
    /// the embedding of its element indices into `self`.
    pub fn subgroup(&self, elements: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        let mut embed: Vec<usize> = elements.to_vec();
        embed.sort_unstable();
        embed.dedup();
        // identity first, then the rest in ambient order
        embed.retain(|&x| x != self.identity);
        embed.insert(0, self.identity);
        let index: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut cayley = Vec::with_capacity(embed.len());
        for &x in &embed {
            let row: Option<Vec<usize>> = embed
                .iter()
                .map(|&y| index.get(&self.mul(x, y)).copied())
                .collect();
            cayley.push(
                row.ok_or_else(|| Error::InvalidArgument("element set is not closed".into()))?,
            );
        }
        let mut gens: Vec<usize> = Vec::new();
        let mut span = vec![self.identity];
        for &x in &embed {
            if !span.contains(&x) {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        let generators = gens
            .iter()
            .enumerate()
            .map(|(k, &x)| Generator {
                name: format!("h{k}"),
                element: index[&x],
            })
            .collect();
        let name = format!("subgroup of {} of order {}", self.name, embed.len());
        Ok((
            FiniteGroup::from_cayley_table(name, cayley, generators)?,
            embed,
        ))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: GroupFile = serde_json::from_str(text)?;
        file.into_group()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let group = Self::from_json_str(&text)?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("group");
        Ok(if group.name.is_empty() {
            group.with_name(stem)
        } else {
            group
        })
    }

    pub fn to_group_file(&self) -> GroupFile {
        GroupFile {
            name: Some(self.name.clone()),
            order: self.order(),
            cayley: self.cayley.clone(),
            generators: self.generators.clone(),
            relators: self
                .relators
                .iter()
                .map(|w| {
                    w.letters
                        .iter()
                        .map(|&(g, e)| (self.generators[g].name.clone(), e as i64))
                        .collect()
                })
                .collect(),
        }
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// On-disk group description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    pub cayley: Vec<Vec<usize>>,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub relators: Vec<Vec<(String, i64)>>,
}

impl GroupFile {
    pub fn into_group(self) -> Result<FiniteGroup> {
        if self.cayley.len() != self.order {
            return Err(Error::InvalidGroup(format!(
                "declared order {} but the Cayley table has {} rows",
                self.order,
                self.cayley.len()
            )));
        }
        let names: HashMap<&str, usize> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.as_str(), i))
            .collect();
        let mut relators = Vec::with_capacity(self.relators.len());
        for r in &self.relators {
            let mut powers = Vec::with_capacity(r.len());
            for (name, e) in r {
                let pos = names.get(name.as_str()).ok_or_else(|| {
                    Error::InvalidGroup(format!("relator uses unknown generator `{name}`"))
                })?;
                powers.push((*pos, *e));
            }
            relators.push(Word::from_powers(&powers));
        }
        FiniteGroup::new(
            self.name.unwrap_or_default(),
            self.cayley,
            self.generators,
            relators,
        )
    }
}

const LETTERS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

fn letter_name(k: usize) -> String {
    LETTERS
        .get(k)
        .map_or_else(|| format!("x{k}"), |s| s.to_string())
}

/// `C_{k₁} × … × C_{k_r}` with one generator per factor, relators the
/// `kᵢ`-th powers followed by all commutators.
pub fn make_abelian(factors: &[i64]) -> Result<FiniteGroup> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one cyclic factor is required".into(),
        ));
    }
    if let Some(&bad) = factors.iter().find(|&&k| k < 2) {
        return Err(Error::InvalidInvariant(bad));
    }
    let ks: Vec<usize> = factors.iter().map(|&k| k as usize).collect();
    let order: usize = ks.iter().product();
    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = vec![0; ks.len()];
        for i in (0..ks.len()).rev() {
            d[i] = x % ks[i];
            x /= ks[i];
        }
        d
    };
    let index = |d: &[usize]| d.iter().zip(&ks).fold(0, |acc, (x, k)| acc * k + x);
    let cayley = (0..order)
        .map(|g| {
            let dg = digits(g);
            (0..order)
                .map(|h| {
                    let s: Vec<usize> = dg
                        .iter()
                        .zip(digits(h))
                        .zip(&ks)
                        .map(|((a, b), k)| (a + b) % k)
                        .collect();
                    index(&s)
                })
                .collect()
        })
        .collect();
    let generators = (0..ks.len())
        .map(|i| {
            let mut d = vec![0; ks.len()];
            d[i] = 1;
            Generator {
                name: letter_name(i),
                element: index(&d),
            }
        })
        .collect();
    let mut relators: Vec<Word> = ks
        .iter()
        .enumerate()
        .map(|(i, &k)| Word::power(i, k as i64))
        .collect();
    for i in 0..ks.len() {
        for j in i + 1..ks.len() {
            relators.push(Word::commutator(i, j));
        }
    }
    let name = ks
        .iter()
        .map(|k| format!("C{k}"))
        .collect::<Vec<_>>()
        .join("x");
    FiniteGroup::new(name, cayley, generators, relators)
}

/// `⟨a | aⁿ⟩` for any `n ≥ 1`; unlike [`make_abelian`] this keeps a
/// generator even when `n = 1`.
pub fn cyclic_with_generator(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidInvariant(0));
    }
    let cayley = (0..n)
        .map(|x| (0..n).map(|y| (x + y) % n).collect())
        .collect();
    let a = Generator {
        name: "a".into(),
        element: 1 % n,
    };
    FiniteGroup::new(
        format!("C{n}"),
        cayley,
        vec![a],
        vec![Word::power(0, n as i64)],
    )
}

/// `C_n × C_m` with generators `a`, `b` and relators `aⁿ, bᵐ, [a, b]`,
/// allowing either factor to be trivial.
pub fn two_generator_abelian(n: usize, m: usize) -> Result<FiniteGroup> {
    let g = direct_product(&cyclic_with_generator(n)?, &cyclic_with_generator(m)?);
    Ok(g.with_name(format!("C{n}xC{m}")))
}

/// `G × H`, elements `(g, h) ↦ g·|H| + h`; generators of `G` then of `H`;
/// relators of both factors followed by the cross commutators.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (ng, nh) = (g.order(), h.order());
    let cayley = (0..ng * nh)
        .map(|x| {
            (0..ng * nh)
                .map(|y| g.mul(x / nh, y / nh) * nh + h.mul(x % nh, y % nh))
                .collect()
        })
        .collect();
    let mut used: Vec<String> = g.generators.iter().map(|x| x.name.clone()).collect();
    let mut generators: Vec<Generator> = g
        .generators
        .iter()
        .map(|x| Generator {
            name: x.name.clone(),
            element: x.element * nh + h.identity,
        })
        .collect();
    for x in &h.generators {
        let mut name = x.name.clone();
        if used.contains(&name) {
            name = (0..)
                .map(letter_name)
                .find(|c| !used.contains(c) && !h.generators.iter().any(|y| &y.name == c))
                .unwrap();
        }
        used.push(name.clone());
        generators.push(Generator {
            name,
            element: g.identity * nh + x.element,
        });
    }
    let shift = g.generators.len();
    let mut relators: Vec<Word> = g.relators.clone();
    relators.extend(h.relators.iter().map(|w| w.relabel(|k| k + shift)));
    for i in 0..shift {
        for j in 0..h.generators.len() {
            relators.push(Word::commutator(i, shift + j));
        }
    }
    let name = match (g.order(), h.order()) {
        (1, _) => h.name.clone(),
        (_, 1) => g.name.clone(),
        _ => format!("{}x{}", g.name, h.name),
    };
    let identity = g.identity * nh + h.identity;
    let inverse = (0..ng * nh)
        .map(|x| g.inv(x / nh) * nh + h.inv(x % nh))
        .collect();
    FiniteGroup {
        name,
        cayley,
        identity,
        inverse,
        generators,
        relators,
    }
}

/// Closure of concrete generators under a multiplication, numbered in
/// breadth-first discovery order from the identity.
fn build_by_closure<T: Clone + Eq + Hash>(
    name: &str,
    identity: T,
    gens: &[(&str, T)],
    mul: impl Fn(&T, &T) -> T,
    relators: Vec<Word>,
) -> FiniteGroup {
    let mut elems = vec![identity.clone()];
    let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
    let mut i = 0;
    while i < elems.len() {
        for (_, g) in gens {
            let y = mul(&elems[i], g);
            if !index.contains_key(&y) {
                index.insert(y.clone(), elems.len());
                elems.push(y);
            }
        }
        i += 1;
    }
    let cayley = elems
        .iter()
        .map(|x| elems.iter().map(|y| index[&mul(x, y)]).collect())
        .collect();
    let generators = gens
        .iter()
        .map(|(n, g)| Generator {
            name: n.to_string(),
            element: index[g],
        })
        .collect();
    FiniteGroup::new(name, cayley, generators, relators).expect("hard-coded catalog group is valid")
}

/// Dihedral group of order 8 as symmetries of a square, `⟨r, s | r⁴, s², srsr⟩`.
pub fn dihedral8() -> FiniteGroup {
    type Perm = [u8; 4];
    let compose = |p: &Perm, q: &Perm| -> Perm {
        [
            p[q[0] as usize],
            p[q[1] as usize],
            p[q[2] as usize],
            p[q[3] as usize],
        ]
    };
    let relators = vec![
        Word::power(0, 4),
        Word::power(1, 2),
        Word {
            letters: vec![(1, 1), (0, 1), (1, 1), (0, 1)],
        },
    ];
    build_by_closure(
        "D8",
        [0, 1, 2, 3],
        &[("r", [1, 2, 3, 0]), ("s", [0, 3, 2, 1])],
        compose,
        relators,
    )
}

/// Quaternion group, `⟨i, j | i⁴, i²j⁻², j⁻¹iji⟩`.
pub fn quaternion8() -> FiniteGroup {
    // (sign, unit) with unit 0..4 = 1, i, j, k
    type Q = (i8, u8);
    const TABLE: [[(i8, u8); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let mul = |x: &Q, y: &Q| -> Q {
        let (s, u) = TABLE[x.1 as usize][y.1 as usize];
        (x.0 * y.0 * s, u)
    };
    let relators = vec![
        Word::power(0, 4),
        Word::from_powers(&[(0, 2), (1, -2)]),
        Word {
            letters: vec![(1, -1), (0, 1), (1, 1), (0, 1)],
        },
    ];
    build_by_closure("Q8", (1, 0), &[("i", (1, 1)), ("j", (1, 2))], mul, relators)
}

const ABELIAN_CATALOG: &[&[i64]] = &[
    &[2],
    &[3],
    &[4],
    &[2, 2],
    &[5],
    &[6],
    &[7],
    &[8],
    &[4, 2],
    &[2, 2, 2],
    &[9],
    &[3, 3],
    &[10],
    &[11],
    &[12],
    &[6, 2],
    &[13],
    &[14],
    &[15],
    &[16],
    &[8, 2],
    &[4, 4],
    &[4, 2, 2],
    &[2, 2, 2, 2],
];

/// Catalog names, ordered by group order.
pub fn catalog_names() -> Vec<String> {
    let mut named: Vec<(usize, String)> = vec![(1, "C1".into())];
    for f in ABELIAN_CATALOG {
        let order = f.iter().product::<i64>() as usize;
        named.push((
            order,
            f.iter()
                .map(|k| format!("C{k}"))
                .collect::<Vec<_>>()
                .join("x"),
        ));
    }
    named.extend([
        (8, "D8".into()),
        (8, "Q8".into()),
        (16, "D8xC2".into()),
        (16, "Q8xC2".into()),
    ]);
    named.sort_by_key(|(o, _)| *o);
    named.into_iter().map(|(_, n)| n).collect()
}

pub fn catalog(name: &str) -> Result<FiniteGroup> {
    if !catalog_names().iter().any(|n| n == name) {
        return Err(Error::CatalogMiss {
            name: name.to_string(),
            available: catalog_names().join(", "),
        });
    }
    Ok(match name {
        "C1" => FiniteGroup::trivial(),
        "D8" => dihedral8(),
        "Q8" => quaternion8(),
        "D8xC2" => direct_product(&dihedral8(), &make_abelian(&[2])?),
        "Q8xC2" => direct_product(&quaternion8(), &make_abelian(&[2])?),
        _ => parse_group_spec(name)?,
    })
}

/// Parses a catalog name or a product of atoms `C<n>`, `D8`, `Q8` joined by `x`.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(Error::Parse("empty group spec".into()));
    }
    if matches!(spec, "C1" | "D8" | "Q8" | "D8xC2" | "Q8xC2") {
        return catalog(spec);
    }
    enum Atom {
        Cyclic(i64),
        Named(FiniteGroup),
    }
    let mut atoms = Vec::new();
    for part in spec.split('x') {
        let atom = match part {
            "D8" => Atom::Named(dihedral8()),
            "Q8" => Atom::Named(quaternion8()),
            _ => {
                let digits = part.strip_prefix('C').ok_or_else(|| {
                    Error::Parse(format!("unrecognized factor `{part}` in `{spec}`"))
                })?;
                let n: i64 = digits.parse().map_err(|_| {
                    Error::Parse(format!("bad cyclic order `{digits}` in `{spec}`"))
                })?;
                Atom::Cyclic(n)
            }
        };
        atoms.push(atom);
    }
    if atoms.iter().all(|a| matches!(a, Atom::Cyclic(_))) {
        let ks: Vec<i64> = atoms
            .iter()
            .map(|a| if let Atom::Cyclic(k) = a { *k } else { 0 })
            .collect();
        if ks == [1] {
            return Ok(FiniteGroup::trivial());
        }
        return make_abelian(&ks);
    }
    let mut acc = FiniteGroup::trivial();
    for a in atoms {
        let g = match a {
            Atom::Cyclic(1) => FiniteGroup::trivial(),
            Atom::Cyclic(k) => make_abelian(&[k])?,
            Atom::Named(g) => g,
        };
        acc = direct_product(&acc, &g);
    }
    Ok(acc.with_name(spec))
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Elements of one Sylow `p`-subgroup, ascending.
pub fn sylow_subgroup(g: &FiniteGroup, p: u64) -> Result<Vec<usize>> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let p = p as usize;
    let mut target = 1;
    let mut rest = g.order();
    while rest.is_multiple_of(p) {
        rest /= p;
        target *= p;
    }
    let is_p_power = |mut n: usize| {
        while n.is_multiple_of(p) {
            n /= p;
        }
        n == 1
    };
    let mut gens: Vec<usize> = Vec::new();
    let mut current = vec![g.identity()];
    // a non-maximal p-subgroup always has a p-element in its normalizer
    // outside it, so greedy extension cannot get stuck
    while current.len() < target {
        let step = g.elements().filter(|x| !current.contains(x)).find_map(|x| {
            let mut trial = gens.clone();
            trial.push(x);
            let span = g.closure(&trial);
            is_p_power(span.len()).then_some((trial, span))
        });
        match step {
            Some((t, span)) => {
                gens = t;
                current = span;
            }
            None => {
                return Err(Error::SearchExhausted(format!(
                    "no {p}-subgroup extends one of order {}",
                    current.len()
                )))
            }
        }
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_four() {
        let g = make_abelian(&[2, 2]).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.generators().len(), 2);
        assert_eq!(g.relators().len(), 3);
        assert!(g.is_abelian());
    }

    #[test]
    fn cyclic_six() {
        let g = make_abelian(&[6]).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.relators(), &[Word::power(0, 6)]);
    }

    #[test]
    fn invalid_invariant() {
        assert!(matches!(
            make_abelian(&[4, 1]),
            Err(Error::InvalidInvariant(1))
        ));
    }

    #[test]
    fn named_abelian() {
        assert_eq!(make_abelian(&[4, 2, 2]).unwrap().name(), "C4xC2xC2");
        assert_eq!(catalog("C4xC2xC2").unwrap().order(), 16);
    }

    #[test]
    fn words() {
        let c4 = make_abelian(&[4]).unwrap();
        assert_eq!(c4.evaluate_word(&Word::empty()), c4.identity());
        assert_eq!(c4.evaluate_word(&Word::power(0, 4)), c4.identity());
        assert_ne!(c4.evaluate_word(&Word::power(0, 3)), c4.identity());
        let d8 = dihedral8();
        let srsr = Word {
            letters: vec![(1, 1), (0, 1), (1, 1), (0, 1)],
        };
        assert_eq!(d8.evaluate_word(&srsr), d8.identity());
        assert!(!d8.is_abelian());
    }

    #[test]
    fn quaternion() {
        let q = catalog("Q8").unwrap();
        assert_eq!(q.order(), 8);
        assert_eq!(q.relators().len(), 3);
        assert_eq!(q.involutions().len(), 1);
        assert!(!q.is_abelian());
    }

    #[test]
    fn products() {
        let c2 = make_abelian(&[2]).unwrap();
        let v = direct_product(&c2, &c2);
        assert_eq!(v.order(), 4);
        assert!(v.is_abelian());
        assert_eq!(v.involutions().len(), 3);
        let q = catalog("Q8xC2").unwrap();
        assert_eq!(q.order(), 16);
        let h = direct_product(&FiniteGroup::trivial(), &dihedral8());
        assert_eq!(h.cayley(), dihedral8().cayley());
    }

    #[test]
    fn catalog_contents() {
        let names = catalog_names();
        assert_eq!(names.len(), 29);
        assert_eq!(names[0], "C1");
        for n in &names {
            let g = catalog(n).unwrap();
            assert_eq!(g.name(), n);
        }
        assert!(matches!(catalog("S3"), Err(Error::CatalogMiss { .. })));
        assert_eq!(catalog("C1").unwrap().order(), 1);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(parse_group_spec("C6xC6").unwrap().order(), 36);
        assert_eq!(parse_group_spec("D8xC3").unwrap().order(), 24);
        assert!(matches!(parse_group_spec("Z4"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_group_spec("C4xC0"),
            Err(Error::InvalidInvariant(0))
        ));
    }

    #[test]
    fn sylow() {
        let c6 = make_abelian(&[6]).unwrap();
        assert_eq!(sylow_subgroup(&c6, 2).unwrap().len(), 2);
        assert_eq!(sylow_subgroup(&c6, 3).unwrap().len(), 3);
        assert_eq!(sylow_subgroup(&dihedral8(), 2).unwrap().len(), 8);
        assert_eq!(
            sylow_subgroup(&parse_group_spec("D8xC3").unwrap(), 2)
                .unwrap()
                .len(),
            8
        );
    }

    #[test]
    fn subgroup_lattice() {
        assert_eq!(dihedral8().subgroups().len(), 10);
        assert_eq!(quaternion8().subgroups().len(), 6);
        assert_eq!(make_abelian(&[2, 2]).unwrap().subgroups().len(), 5);
    }

    #[test]
    fn subgroup_presentation() {
        let g = dihedral8();
        let s = sylow_subgroup(&g, 2).unwrap();
        let (h, embed) = g
            .subgroup(&[
                g.identity(),
                g.generators()[0].element,
                g.pow(g.generators()[0].element, 2),
                g.pow(g.generators()[0].element, 3),
            ])
            .unwrap();
        assert_eq!(h.order(), 4);
        assert_eq!(embed[0], g.identity());
        assert!(h.is_abelian());
        assert_eq!(s.len(), 8);
    }

    #[test]
    fn group_file_roundtrip() {
        let g = catalog("D8").unwrap();
        let text = serde_json::to_string(&g.to_group_file()).unwrap();
        let back = FiniteGroup::from_json_str(&text).unwrap();
        assert_eq!(back, g);
    }
}
