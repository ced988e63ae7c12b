//! Truth tables, implicant covers and the truth-table file format.

use std::fmt;

use super::expr::{BoolExpr, MAX_VARS};
use crate::error::{Error, ParseError, Result};
use crate::netlist::is_identifier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TtValue {
    Zero,
    One,
    DontCare,
}

impl TtValue {
    fn symbol(self) -> char {
        match self {
            TtValue::Zero => '0',
            TtValue::One => '1',
            TtValue::DontCare => '-',
        }
    }
}

/// Complete function table. Row `r` assigns variable `i` the bit
/// `n - 1 - i` of `r`, so the first variable is the most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthTable {
    vars: Vec<String>,
    rows: Vec<TtValue>,
}

fn check_vars(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(Error::Capacity {
            what: "truth-table variables",
            found: n,
            limit: MAX_VARS,
        });
    }
    Ok(())
}

impl TruthTable {
    pub fn new(vars: Vec<String>, rows: Vec<TtValue>) -> Result<Self> {
        check_vars(vars.len())?;
        if rows.len() != 1 << vars.len() {
            return Err(Error::Argument(format!(
                "{} variables need {} rows, got {}",
                vars.len(),
                1u64 << vars.len(),
                rows.len()
            )));
        }
        Ok(Self { vars, rows })
    }

    /// Table of the function whose on-set is `f(row)`.
    pub fn from_fn(vars: Vec<String>, f: impl Fn(usize) -> bool) -> Result<Self> {
        check_vars(vars.len())?;
        let rows = (0..1usize << vars.len())
            .map(|r| if f(r) { TtValue::One } else { TtValue::Zero })
            .collect();
        Ok(Self { vars, rows })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn rows(&self) -> &[TtValue] {
        &self.rows
    }

    pub fn get(&self, row: usize) -> TtValue {
        self.rows[row]
    }

    /// Variable values of a row, in variable order.
    pub fn assignment(&self, row: usize) -> Vec<bool> {
        let n = self.vars.len();
        (0..n).map(|i| row >> (n - 1 - i) & 1 == 1).collect()
    }

    pub fn on_set(&self) -> Vec<usize> {
        self.rows_with(TtValue::One)
    }

    pub fn dont_cares(&self) -> Vec<usize> {
        self.rows_with(TtValue::DontCare)
    }

    fn rows_with(&self, v: TtValue) -> Vec<usize> {
        (0..self.rows.len()).filter(|&r| self.rows[r] == v).collect()
    }
}

/// Evaluates `e` on every assignment, 64 rows per pass.
pub fn to_truth_table(e: &BoolExpr) -> Result<TruthTable> {
    let n = e.vars.len();
    check_vars(n)?;
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let total = 1usize << n;
    let mut rows = Vec::with_capacity(total);
    let mut masks = vec![0u64; n];
    let mut base = 0;
    while base < total {
        for (i, m) in masks.iter_mut().enumerate() {
            let bit = n - 1 - i;
            *m = if bit < 6 {
                LOW[bit]
            } else if base >> bit & 1 == 1 {
                !0
            } else {
                0
            };
        }
        let out = e.root.eval_block(&masks);
        let count = (total - base).min(64);
        rows.extend((0..count).map(|k| if out >> k & 1 == 1 { TtValue::One } else { TtValue::Zero }));
        base += 64;
    }
    Ok(TruthTable {
        vars: e.vars.clone(),
        rows,
    })
}

/// Product term over `n` variables. Bit `n - 1 - i` of `care` is set when
/// variable `i` appears, and the same bit of `value` gives its polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Implicant {
    pub care: u32,
    pub value: u32,
}

impl Implicant {
    pub fn minterm(row: usize, n: usize) -> Self {
        let care = if n == 32 { !0 } else { (1u32 << n) - 1 };
        Self {
            care,
            value: row as u32 & care,
        }
    }

    pub fn covers(&self, row: usize) -> bool {
        row as u32 & self.care == self.value
    }

    pub fn literal_count(&self) -> usize {
        self.care.count_ones() as usize
    }

    /// `(variable index, positive)` pairs in variable order.
    pub fn literals(&self, n: usize) -> Vec<(usize, bool)> {
        (0..n)
            .filter(|&i| self.care >> (n - 1 - i) & 1 == 1)
            .map(|i| (i, self.value >> (n - 1 - i) & 1 == 1))
            .collect()
    }

    /// Rows covered by this implicant, ascending.
    pub fn rows(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        let full = if n == 32 { !0u32 } else { (1u32 << n) - 1 };
        let free = full & !self.care;
        // Enumerate subsets of `free` in increasing order.
        let mut sub = Some(0u32);
        std::iter::from_fn(move || {
            let s = sub?;
            sub = if s == free {
                None
            } else {
                Some((s | !free).wrapping_add(1) & free)
            };
            Some((self.value | s) as usize)
        })
    }

    /// Per-variable `0`/`1`/`-` pattern.
    pub fn pattern(&self, n: usize) -> String {
        (0..n)
            .map(|i| {
                let bit = n - 1 - i;
                match (self.care >> bit & 1, self.value >> bit & 1) {
                    (0, _) => '-',
                    (_, 1) => '1',
                    _ => '0',
                }
            })
            .collect()
    }
}

/// Sum of products over `num_vars` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub num_vars: usize,
    pub implicants: Vec<Implicant>,
}

impl Cover {
    pub fn eval_row(&self, row: usize) -> bool {
        self.implicants.iter().any(|c| c.covers(row))
    }

    pub fn len(&self) -> usize {
        self.implicants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.implicants.is_empty()
    }

    /// True when the cover agrees with `t` on every care row.
    pub fn matches(&self, t: &TruthTable) -> bool {
        (0..t.rows.len()).all(|r| match t.rows[r] {
            TtValue::One => self.eval_row(r),
            TtValue::Zero => !self.eval_row(r),
            TtValue::DontCare => true,
        })
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.implicants.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&c.pattern(self.num_vars))?;
        }
        Ok(())
    }
}

/// One implicant per on-set row.
pub fn canonical_sop(t: &TruthTable) -> Cover {
    let n = t.num_vars();
    Cover {
        num_vars: n,
        implicants: t.on_set().into_iter().map(|r| Implicant::minterm(r, n)).collect(),
    }
}

/// Parsed truth-table file: the expanded table plus the listed on-cubes,
/// which form an unminimized cover of the on-set.
#[derive(Debug, Clone, PartialEq)]
pub struct TableSource {
    pub table: TruthTable,
    pub on_cubes: Cover,
}

pub fn parse_truth_table(text: &str) -> Result<TruthTable> {
    parse_table_source(text).map(|s| s.table)
}

/// Parses a header of variable names followed by `<bits> <0|1|->` rows.
/// Input bits may be `-` to list a cube of rows at once. Unlisted rows are 0;
/// assigning one row two different values is an error. `#` starts a comment.
pub fn parse_table_source(text: &str) -> Result<TableSource> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((hline, header)) = lines.next() else {
        return Err(ParseError::new(1, 1, "missing header of variable names").into());
    };
    let vars: Vec<String> = header.split_whitespace().map(str::to_string).collect();
    for (i, v) in vars.iter().enumerate() {
        if !is_identifier(v) {
            return Err(ParseError::new(hline, column_of(header, i), format!("invalid variable name `{v}`")).into());
        }
        if vars[..i].contains(v) {
            return Err(ParseError::new(hline, column_of(header, i), format!("duplicate variable `{v}`")).into());
        }
    }
    check_vars(vars.len())?;
    let n = vars.len();

    let mut rows = vec![None::<TtValue>; 1 << n];
    let mut on_cubes = Vec::new();
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(ParseError::new(line, 1, "expected `<bits> <0|1|->`").into());
        }
        let (bits, value) = (fields[0], fields[1]);
        let vcol = column_of(content, 1);
        if bits.chars().count() != n {
            return Err(ParseError::new(
                line,
                column_of(content, 0),
                format!("expected {n} input bits, got {}", bits.chars().count()),
            )
            .into());
        }
        let mut cube = Implicant { care: 0, value: 0 };
        for (i, c) in bits.chars().enumerate() {
            let bit = 1u32 << (n - 1 - i);
            match c {
                '0' => cube.care |= bit,
                '1' => {
                    cube.care |= bit;
                    cube.value |= bit;
                }
                '-' => {}
                other => {
                    return Err(
                        ParseError::new(line, column_of(content, 0) + i, format!("bad input bit `{other}`")).into(),
                    )
                }
            }
        }
        let v = match value {
            "0" => TtValue::Zero,
            "1" => TtValue::One,
            "-" => TtValue::DontCare,
            other => return Err(ParseError::new(line, vcol, format!("bad output value `{other}`")).into()),
        };
        for r in cube.rows(n) {
            match rows[r] {
                Some(old) if old != v => {
                    return Err(ParseError::new(
                        line,
                        vcol,
                        format!(
                            "row {} already set to {}",
                            Implicant::minterm(r, n).pattern(n),
                            old.symbol()
                        ),
                    )
                    .into())
                }
                _ => rows[r] = Some(v),
            }
        }
        if v == TtValue::One && !on_cubes.contains(&cube) {
            on_cubes.push(cube);
        }
    }
    let table = TruthTable {
        vars,
        rows: rows.into_iter().map(|v| v.unwrap_or(TtValue::Zero)).collect(),
    };
    Ok(TableSource {
        table,
        on_cubes: Cover {
            num_vars: n,
            implicants: on_cubes,
        },
    })
}

/// 1-based column of the `field`th whitespace-separated field of `line`.
fn column_of(line: &str, field: usize) -> usize {
    let mut count = 0;
    let mut prev_ws = true;
    for (col, c) in line.chars().enumerate() {
        if !c.is_whitespace() && prev_ws {
            if count == field {
                return col + 1;
            }
            count += 1;
        }
        prev_ws = c.is_whitespace();
    }
    1
}

/// Emits a table in the file format, listing every row that is not 0.
pub fn emit_truth_table(t: &TruthTable) -> String {
    let n = t.num_vars();
    let mut s = t.vars.join(" ");
    s.push('\n');
    for (r, v) in t.rows.iter().enumerate() {
        if *v != TtValue::Zero {
            s.push_str(&Implicant::minterm(r, n).pattern(n));
            s.push(' ');
            s.push(v.symbol());
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::parse_expr;

    fn table(text: &str) -> TruthTable {
        to_truth_table(&parse_expr(text).unwrap()).unwrap()
    }

    #[test]
    fn row_order_is_msb_first() {
        let t = table("a & !b");
        assert_eq!(t.on_set(), vec![2]);
        assert_eq!(t.assignment(2), vec![true, false]);
    }

    #[test]
    fn block_evaluation_matches_scalar() {
        let e = parse_expr("(a ^ b) | (c & !d & e) ^ (f | g & h)").unwrap();
        let t = to_truth_table(&e).unwrap();
        for r in 0..t.rows().len() {
            let want = e.eval(&t.assignment(r));
            assert_eq!(t.get(r) == TtValue::One, want, "row {r}");
        }
    }

    #[test]
    fn canonical_sop_examples() {
        assert!(canonical_sop(&table("a & !a")).is_empty());
        let and = canonical_sop(&table("a & b"));
        assert_eq!(and.to_string(), "11");
        let sum = canonical_sop(&table("a ^ b ^ c"));
        assert_eq!(sum.len(), 4);
        assert!(sum.implicants.iter().all(|c| c.literal_count() == 3));
    }

    #[test]
    fn implicant_rows_enumerate_cube() {
        let c = Implicant {
            care: 0b1010,
            value: 0b1000,
        };
        assert_eq!(c.rows(4).collect::<Vec<_>>(), vec![8, 9, 12, 13]);
        assert_eq!(c.pattern(4), "1-0-");
        assert_eq!(c.literals(4), vec![(0, true), (2, false)]);
    }

    #[test]
    fn parse_file_format() {
        let src = parse_table_source("a b c\n# xor of a and b\n01- 1\n10- 1\n111 -\n").unwrap();
        let t = &src.table;
        assert_eq!(t.vars(), &["a", "b", "c"]);
        assert_eq!(t.on_set(), vec![2, 3, 4, 5]);
        assert_eq!(t.dont_cares(), vec![7]);
        assert_eq!(src.on_cubes.len(), 2);
        assert_eq!(parse_truth_table(&emit_truth_table(t)).unwrap(), *t);
    }

    #[test]
    fn parse_errors() {
        let line = |text: &str| match parse_truth_table(text) {
            Err(Error::Parse(p)) => (p.line, p.column),
            other => panic!("{other:?}"),
        };
        assert_eq!(line(""), (1, 1));
        assert_eq!(line("a b\n011 1\n"), (2, 1));
        assert_eq!(line("a b\n0x 1\n"), (2, 2));
        assert_eq!(line("a b\n01 2\n"), (2, 4));
        assert_eq!(line("a b\n01 1\n0- 0\n"), (3, 4));
        assert_eq!(line("a a\n"), (1, 3));
        assert!(matches!(
            parse_truth_table(&(0..25).map(|i| format!("v{i} ")).collect::<String>()),
            Err(Error::Capacity { .. })
        ));
    }
}
