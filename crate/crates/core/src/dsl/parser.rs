use super::lexer::{lex, Tok};
use super::*;

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

/// Parses one file. Stops at the first error.
pub fn parse(text: &str) -> Result<Document, Diagnostic> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        items.push(p.item()?);
    }
    Ok(Document { items })
}

fn variable(s: &str) -> Option<(char, usize)> {
    let mut cs = s.chars();
    let head = cs.next()?;
    let rest = cs.as_str();
    if (head == 'x' || head == 'p') && !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) && !rest.starts_with('0') {
        return Some((head, rest.parse().ok()?));
    }
    None
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(Diagnostic::new(
            self.span(),
            format!("expected {expected}, found {}", self.peek().describe()),
        ))
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == w)
    }

    fn sym(&mut self, s: &str) -> PResult<()> {
        if self.at_sym(s) {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("`{s}`"))
        }
    }

    fn word(&mut self, w: &str) -> PResult<()> {
        if self.at_word(w) {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("`{w}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("a name"),
        }
    }

    fn num(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.error("a number"),
        }
    }

    fn string(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("a string"),
        }
    }

    /// `first (, next)*` until the closing symbol, which is consumed.
    fn list<T>(&mut self, close: &str, mut one: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.at_sym(close) {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(one(self)?);
            if self.at_sym(",") {
                self.bump();
            } else {
                self.sym(close)?;
                return Ok(out);
            }
        }
    }

    /// `a, b, c` terminated by `;`.
    fn names_until_semicolon(&mut self) -> PResult<Vec<String>> {
        let mut out = vec![self.ident()?];
        while self.at_sym(",") {
            self.bump();
            out.push(self.ident()?);
        }
        self.sym(";")?;
        Ok(out)
    }

    fn item(&mut self) -> PResult<Item> {
        let span = self.span();
        let Tok::Ident(kw) = self.peek().clone() else {
            return self.error("a block keyword");
        };
        self.bump();
        match kw.as_str() {
            "import" => {
                let path = self.string()?;
                self.sym(";")?;
                Ok(Item::Import { span, path })
            }
            "theory" => self.theory(span).map(Item::Theory),
            "map" => self.map(span).map(Item::Map),
            "sigma" => self.sigma(span).map(Item::Sigma),
            "category" => self.category(span).map(Item::Category),
            "model" => self.model(span).map(Item::Model),
            "probes" => {
                let name = self.ident()?;
                self.sym("=")?;
                let models = self.names_until_semicolon()?;
                Ok(Item::Probes(ProbesDecl { span, name, models }))
            }
            "check" => {
                let args = self.string()?;
                self.word("expect")?;
                let expect = self.num()? as i32;
                self.sym(";")?;
                Ok(Item::Check(CheckDecl { span, args, expect }))
            }
            _ => Err(Diagnostic::new(
                span,
                format!("expected one of import, theory, map, sigma, category, model, probes, check; found `{kw}`"),
            )),
        }
    }

    fn theory(&mut self, span: Span) -> PResult<TheoryDecl> {
        let name = self.ident()?;
        self.sym("{")?;
        let mut items = Vec::new();
        while !self.at_sym("}") {
            let span = self.span();
            let Tok::Ident(kw) = self.peek().clone() else {
                return self.error("`op`, `basis`, `eq`, `cell`, `celleq` or `}`");
            };
            self.bump();
            let item = match kw.as_str() {
                "op" => {
                    let name = self.ident()?;
                    self.sym(":")?;
                    let arity = self.num()?;
                    self.sym("->")?;
                    let tspan = self.span();
                    if self.num()? != 1 {
                        return Err(Diagnostic::new(tspan, "operations have target 1"));
                    }
                    TheoryItem::Op { span, name, arity }
                }
                "basis" => {
                    let ops = self.names_until_semicolon()?;
                    items.push(TheoryItem::Basis { span, ops });
                    continue;
                }
                "eq" | "celleq" => {
                    let name = self.ident()?;
                    self.sym(":")?;
                    let lhs = self.expr()?;
                    self.sym("=")?;
                    let rhs = self.expr()?;
                    if kw == "eq" {
                        TheoryItem::Eq { span, name, lhs, rhs }
                    } else {
                        TheoryItem::CellEq { span, name, lhs, rhs }
                    }
                }
                "cell" => {
                    let name = self.ident()?;
                    self.sym(":")?;
                    let source = self.expr()?;
                    self.sym("=>")?;
                    let target = self.expr()?;
                    let invertible = self.at_word("invertible");
                    if invertible {
                        self.bump();
                    }
                    TheoryItem::Cell {
                        span,
                        name,
                        source,
                        target,
                        invertible,
                    }
                }
                _ => {
                    return Err(Diagnostic::new(
                        span,
                        format!("expected `op`, `basis`, `eq`, `cell` or `celleq`, found `{kw}`"),
                    ))
                }
            };
            self.sym(";")?;
            items.push(item);
        }
        self.sym("}")?;
        Ok(TheoryDecl { span, name, items })
    }

    fn assignments(&mut self) -> PResult<Vec<Assignment>> {
        self.sym("{")?;
        let mut out = Vec::new();
        while !self.at_sym("}") {
            let span = self.span();
            let name = self.ident()?;
            self.sym("=")?;
            let value = self.expr()?;
            self.sym(";")?;
            out.push(Assignment { span, name, value });
        }
        self.sym("}")?;
        Ok(out)
    }

    fn map(&mut self, span: Span) -> PResult<MapDecl> {
        let name = self.ident()?;
        self.sym(":")?;
        let source = self.ident()?;
        self.sym("->")?;
        let target = self.ident()?;
        let images = self.assignments()?;
        Ok(MapDecl {
            span,
            name,
            source,
            target,
            images,
        })
    }

    fn sigma(&mut self, span: Span) -> PResult<SigmaDecl> {
        let name = self.ident()?;
        self.word("for")?;
        let theory = self.ident()?;
        let via = if self.at_word("via") {
            self.bump();
            Some(self.ident()?)
        } else {
            None
        };
        self.word("weakness")?;
        let weakness = self.ident()?;
        let symmetric = self.at_word("symmetric");
        if symmetric {
            self.bump();
        }
        self.sym("{")?;
        let mut entries = Vec::new();
        while !self.at_sym("}") {
            let span = self.span();
            self.sym("(")?;
            let a = self.ident()?;
            self.sym(",")?;
            let b = self.ident()?;
            self.sym(")")?;
            self.sym("=")?;
            let value = self.expr()?;
            self.sym(";")?;
            entries.push(SigmaItem {
                span,
                pair: (a, b),
                value,
            });
        }
        self.sym("}")?;
        Ok(SigmaDecl {
            span,
            name,
            theory,
            via,
            weakness,
            symmetric,
            entries,
        })
    }

    fn category(&mut self, span: Span) -> PResult<CategoryDecl> {
        let name = self.ident()?;
        self.sym("{")?;
        let mut items = Vec::new();
        while !self.at_sym("}") {
            let span = self.span();
            let kw = self.ident()?;
            let item = match kw.as_str() {
                "objects" => CategoryItem::Objects {
                    span,
                    names: self.names_until_semicolon()?,
                },
                "arrow" => {
                    let name = self.ident()?;
                    self.sym(":")?;
                    let src = self.ident()?;
                    self.sym("->")?;
                    let tgt = self.ident()?;
                    self.sym(";")?;
                    CategoryItem::Arrow { span, name, src, tgt }
                }
                "compose" => {
                    let g = self.ident()?;
                    self.sym(".")?;
                    let f = self.ident()?;
                    self.sym("=")?;
                    let h = self.ident()?;
                    self.sym(";")?;
                    CategoryItem::Compose { span, g, f, h }
                }
                _ => {
                    return Err(Diagnostic::new(
                        span,
                        format!("expected `objects`, `arrow` or `compose`, found `{kw}`"),
                    ))
                }
            };
            items.push(item);
        }
        self.sym("}")?;
        Ok(CategoryDecl { span, name, items })
    }

    fn model(&mut self, span: Span) -> PResult<ModelDecl> {
        let name = self.ident()?;
        self.word("of")?;
        let theory = self.ident()?;
        self.word("in")?;
        let carrier = if self.at_word("finset") {
            self.bump();
            Carrier::FinSet
        } else if self.at_word("category") {
            self.bump();
            Carrier::Category(self.ident()?)
        } else {
            return self.error("`finset` or `category`");
        };
        self.sym("{")?;
        let mut items = Vec::new();
        while !self.at_sym("}") {
            let span = self.span();
            if self.at_word("carrier") {
                self.bump();
                let size = self.num()?;
                self.sym(";")?;
                items.push(ModelItem::Size { span, size });
                continue;
            }
            let name = self.ident()?;
            self.sym("=")?;
            let item = if self.at_word("table") {
                self.bump();
                self.sym("[")?;
                ModelItem::Table {
                    span,
                    op: name,
                    values: self.list("]", Self::num)?,
                }
            } else if self.at_word("functor") {
                self.bump();
                self.word("objects")?;
                self.sym("[")?;
                let objects = self.list("]", Self::ident)?;
                self.word("arrows")?;
                self.sym("[")?;
                let arrows = self.list("]", Self::ident)?;
                ModelItem::Functor {
                    span,
                    op: name,
                    objects,
                    arrows,
                }
            } else if self.at_word("nat") {
                self.bump();
                self.sym("[")?;
                ModelItem::Nat {
                    span,
                    cell: name,
                    arrows: self.list("]", Self::ident)?,
                }
            } else {
                return self.error("`table`, `functor` or `nat`");
            };
            self.sym(";")?;
            items.push(item);
        }
        self.sym("}")?;
        Ok(ModelDecl {
            span,
            name,
            theory,
            carrier,
            items,
        })
    }

    pub(super) fn expr(&mut self) -> PResult<Expr> {
        let mut e = self.postfix()?;
        while self.at_sym(".") {
            self.bump();
            let rhs = self.postfix()?;
            e = Expr::Compose(Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.atom()?;
        while self.at_sym("[") {
            self.bump();
            let args = self.list("]", Self::expr)?;
            e = Expr::Subst(Box::new(e), args);
        }
        Ok(e)
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Num(n))
            }
            Tok::Sym("<") => {
                self.bump();
                Ok(Expr::Tuple(self.list(">", Self::expr)?))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.sym(")")?;
                Ok(e)
            }
            Tok::Ident(s) => {
                let span = self.span();
                self.bump();
                if let Some((kind, k)) = variable(&s) {
                    if self.at_sym("(") {
                        return Err(Diagnostic::new(span, format!("`{s}` is a variable and cannot be applied")));
                    }
                    return Ok(if kind == 'x' { Expr::Var(k - 1) } else { Expr::Proj(k - 1) });
                }
                if self.at_sym("(") {
                    self.bump();
                    Ok(Expr::Call(s, self.list(")", Self::expr)?))
                } else {
                    Ok(Expr::Name(s))
                }
            }
            _ => self.error("an expression"),
        }
    }
}
