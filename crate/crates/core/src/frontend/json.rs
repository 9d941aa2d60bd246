//! JSON encoding of the syntax tree.
//!
//! Every node may carry an optional `"pos": {"line": n, "column": n}` member.
//! [`dump_ast_json`] always writes it; [`load_ast_json`] defaults it to `0:0`.

use serde_json::{json, Map, Value};

use super::ast::*;
use super::SchemaError;

pub fn dump_ast_json(unit: &CompilationUnit) -> String {
    let classes: Vec<Value> = unit
        .classes
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "methods": c.methods.iter().map(method_json).collect::<Vec<_>>(),
                "pos": pos_json(c.pos),
            })
        })
        .collect();
    serde_json::to_string_pretty(&json!({ "classes": classes })).expect("tree serializes")
}

fn pos_json(pos: Pos) -> Value {
    json!({ "line": pos.line, "column": pos.column })
}

fn method_json(m: &MethodDecl) -> Value {
    json!({
        "name": m.name,
        "params": m.params.iter().map(|p| json!({
            "name": p.name,
            "type": p.ty,
            "pos": pos_json(p.pos),
        })).collect::<Vec<_>>(),
        "body": stmt_json(&m.body),
        "pos": pos_json(m.pos),
    })
}

fn stmt_json(s: &Stmt) -> Value {
    let mut obj = Map::new();
    let mut put = |k: &str, v: Value| {
        obj.insert(k.to_string(), v);
    };
    match &s.kind {
        StmtKind::Block(stmts) => {
            put("kind", "block".into());
            put("statements", stmts.iter().map(stmt_json).collect());
        }
        StmtKind::LocalVar { ty, name, init } => {
            put("kind", "localVar".into());
            put("type", ty.as_str().into());
            put("name", name.as_str().into());
            if let Some(e) = init {
                put("init", expr_json(e));
            }
        }
        StmtKind::Expr(e) => {
            put("kind", "exprStmt".into());
            put("expr", expr_json(e));
        }
        StmtKind::If { cond, then, otherwise } => {
            put("kind", "if".into());
            put("cond", expr_json(cond));
            put("then", stmt_json(then));
            if let Some(o) = otherwise {
                put("else", stmt_json(o));
            }
        }
        StmtKind::While { cond, body } => {
            put("kind", "while".into());
            put("cond", expr_json(cond));
            put("body", stmt_json(body));
        }
        StmtKind::For {
            init,
            cond,
            update,
            body,
        } => {
            put("kind", "for".into());
            if let Some(i) = init {
                put("init", stmt_json(i));
            }
            if let Some(c) = cond {
                put("cond", expr_json(c));
            }
            if let Some(u) = update {
                put("update", expr_json(u));
            }
            put("body", stmt_json(body));
        }
        StmtKind::Return(value) => {
            put("kind", "return".into());
            if let Some(v) = value {
                put("value", expr_json(v));
            }
        }
        StmtKind::Break(label) | StmtKind::Continue(label) => {
            let kind = if matches!(s.kind, StmtKind::Break(_)) {
                "break"
            } else {
                "continue"
            };
            put("kind", kind.into());
            if let Some(l) = label {
                put("label", l.as_str().into());
            }
        }
        StmtKind::Labeled { label, body } => {
            put("kind", "labeled".into());
            put("label", label.as_str().into());
            put("body", stmt_json(body));
        }
        StmtKind::Empty => put("kind", "empty".into()),
    }
    put("pos", pos_json(s.pos));
    Value::Object(obj)
}

fn expr_json(e: &Expr) -> Value {
    let mut v = match &e.kind {
        ExprKind::Assign { target, op, value } => json!({
            "kind": "assign", "target": target, "op": op.symbol(), "value": expr_json(value),
        }),
        ExprKind::Binary { left, op, right } => json!({
            "kind": "binary", "left": expr_json(left), "op": op.symbol(), "right": expr_json(right),
        }),
        ExprKind::Unary { op, operand } => json!({
            "kind": "unary", "op": op.name(), "operand": expr_json(operand),
        }),
        ExprKind::VarRef(name) => json!({ "kind": "varRef", "name": name }),
        ExprKind::IntLit(value) => json!({ "kind": "intLit", "value": value }),
        ExprKind::BoolLit(value) => json!({ "kind": "boolLit", "value": value }),
        ExprKind::Call { name, args } => json!({
            "kind": "call", "name": name, "args": args.iter().map(expr_json).collect::<Vec<_>>(),
        }),
    };
    v.as_object_mut()
        .expect("object")
        .insert("pos".to_string(), pos_json(e.pos));
    v
}

pub fn load_ast_json(document: &str) -> Result<CompilationUnit, SchemaError> {
    let root: Value = serde_json::from_str(document).map_err(|e| SchemaError::new("", format!("invalid JSON: {e}")))?;
    let root = Node::root(&root);
    let classes = root
        .array("classes")?
        .into_iter()
        .map(|c| {
            Ok(ClassDecl {
                name: c.string("name")?,
                methods: c
                    .array("methods")?
                    .into_iter()
                    .map(|m| load_method(&m))
                    .collect::<Result<_, _>>()?,
                pos: c.pos()?,
            })
        })
        .collect::<Result<_, SchemaError>>()?;
    Ok(CompilationUnit { classes })
}

/// A JSON value together with its path from the document root.
struct Node<'v> {
    value: &'v Value,
    path: String,
}

impl<'v> Node<'v> {
    fn root(value: &'v Value) -> Self {
        Node {
            value,
            path: String::new(),
        }
    }

    fn child_path(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn object(&self) -> Result<&'v Map<String, Value>, SchemaError> {
        self.value
            .as_object()
            .ok_or_else(|| SchemaError::new(&self.path, "expected an object"))
    }

    fn opt(&self, key: &str) -> Result<Option<Node<'v>>, SchemaError> {
        Ok(self.object()?.get(key).filter(|v| !v.is_null()).map(|value| Node {
            value,
            path: self.child_path(key),
        }))
    }

    fn field(&self, key: &str) -> Result<Node<'v>, SchemaError> {
        self.opt(key)?
            .ok_or_else(|| SchemaError::new(&self.child_path(key), "missing required field"))
    }

    fn string(&self, key: &str) -> Result<String, SchemaError> {
        self.field(key)?.as_string()
    }

    fn opt_string(&self, key: &str) -> Result<Option<String>, SchemaError> {
        self.opt(key)?.map(|n| n.as_string()).transpose()
    }

    fn as_string(&self) -> Result<String, SchemaError> {
        self.value
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| SchemaError::new(&self.path, "expected a string"))
    }

    fn array(&self, key: &str) -> Result<Vec<Node<'v>>, SchemaError> {
        let node = self.field(key)?;
        let items = node
            .value
            .as_array()
            .ok_or_else(|| SchemaError::new(&node.path, "expected an array"))?;
        Ok(items
            .iter()
            .enumerate()
            .map(|(i, value)| Node {
                value,
                path: format!("{}[{i}]", node.path),
            })
            .collect())
    }

    fn pos(&self) -> Result<Pos, SchemaError> {
        let Some(p) = self.opt("pos")? else {
            return Ok(Pos::default());
        };
        let num = |key: &str| -> Result<u32, SchemaError> {
            let n = p.field(key)?;
            n.value
                .as_u64()
                .and_then(|v| u32::try_from(v).ok())
                .ok_or_else(|| SchemaError::new(&n.path, "expected a non-negative integer"))
        };
        Ok(Pos::new(num("line")?, num("column")?))
    }

    fn kind(&self) -> Result<(String, Node<'v>), SchemaError> {
        let k = self.field("kind")?;
        Ok((k.as_string()?, k))
    }
}

fn load_method(m: &Node<'_>) -> Result<MethodDecl, SchemaError> {
    let name = m.string("name")?;
    let params = m
        .array("params")?
        .into_iter()
        .map(|p| {
            Ok(Param {
                name: p.string("name")?,
                ty: p.string("type")?,
                pos: p.pos()?,
            })
        })
        .collect::<Result<_, SchemaError>>()?;
    let body_node = m.field("body")?;
    let body = load_stmt(&body_node)?;
    if !matches!(body.kind, StmtKind::Block(_)) {
        return Err(SchemaError::new(
            &body_node.child_path("kind"),
            "method body must be a block",
        ));
    }
    Ok(MethodDecl {
        name,
        params,
        body,
        pos: m.pos()?,
    })
}

fn boxed_stmt(n: &Node<'_>, key: &str) -> Result<Box<Stmt>, SchemaError> {
    Ok(Box::new(load_stmt(&n.field(key)?)?))
}

fn load_stmt(n: &Node<'_>) -> Result<Stmt, SchemaError> {
    let (kind, kind_node) = n.kind()?;
    let kind = match kind.as_str() {
        "block" => StmtKind::Block(n.array("statements")?.iter().map(load_stmt).collect::<Result<_, _>>()?),
        "localVar" => StmtKind::LocalVar {
            ty: n.string("type")?,
            name: n.string("name")?,
            init: n.opt("init")?.map(|e| load_expr(&e)).transpose()?,
        },
        "exprStmt" => StmtKind::Expr(load_expr(&n.field("expr")?)?),
        "if" => StmtKind::If {
            cond: load_expr(&n.field("cond")?)?,
            then: boxed_stmt(n, "then")?,
            otherwise: n.opt("else")?.map(|s| load_stmt(&s).map(Box::new)).transpose()?,
        },
        "while" => StmtKind::While {
            cond: load_expr(&n.field("cond")?)?,
            body: boxed_stmt(n, "body")?,
        },
        "for" => StmtKind::For {
            init: n.opt("init")?.map(|s| load_stmt(&s).map(Box::new)).transpose()?,
            cond: n.opt("cond")?.map(|e| load_expr(&e)).transpose()?,
            update: n.opt("update")?.map(|e| load_expr(&e)).transpose()?,
            body: boxed_stmt(n, "body")?,
        },
        "return" => StmtKind::Return(n.opt("value")?.map(|e| load_expr(&e)).transpose()?),
        "break" => StmtKind::Break(n.opt_string("label")?),
        "continue" => StmtKind::Continue(n.opt_string("label")?),
        "labeled" => StmtKind::Labeled {
            label: n.string("label")?,
            body: boxed_stmt(n, "body")?,
        },
        "empty" => StmtKind::Empty,
        other => {
            return Err(SchemaError::new(
                &kind_node.path,
                format!("unknown statement kind `{other}`"),
            ))
        }
    };
    Ok(Stmt { kind, pos: n.pos()? })
}

fn boxed_expr(n: &Node<'_>, key: &str) -> Result<Box<Expr>, SchemaError> {
    Ok(Box::new(load_expr(&n.field(key)?)?))
}

fn load_expr(n: &Node<'_>) -> Result<Expr, SchemaError> {
    let (kind, kind_node) = n.kind()?;
    let op_of = |key: &str| -> Result<(String, String), SchemaError> {
        let node = n.field(key)?;
        Ok((node.as_string()?, node.path))
    };
    let kind = match kind.as_str() {
        "assign" => {
            let (op, path) = op_of("op")?;
            ExprKind::Assign {
                target: n.string("target")?,
                op: AssignOp::from_symbol(&op)
                    .ok_or_else(|| SchemaError::new(&path, format!("unknown assignment operator `{op}`")))?,
                value: boxed_expr(n, "value")?,
            }
        }
        "binary" => {
            let (op, path) = op_of("op")?;
            ExprKind::Binary {
                left: boxed_expr(n, "left")?,
                op: BinaryOp::from_symbol(&op)
                    .ok_or_else(|| SchemaError::new(&path, format!("unknown binary operator `{op}`")))?,
                right: boxed_expr(n, "right")?,
            }
        }
        "unary" => {
            let (op, path) = op_of("op")?;
            let op = UnaryOp::from_name(&op)
                .ok_or_else(|| SchemaError::new(&path, format!("unknown unary operator `{op}`")))?;
            let operand = boxed_expr(n, "operand")?;
            if op.is_step() && !matches!(operand.kind, ExprKind::VarRef(_)) {
                return Err(SchemaError::new(
                    &n.child_path("operand"),
                    "operand of an increment or decrement must be a varRef",
                ));
            }
            ExprKind::Unary { op, operand }
        }
        "varRef" => ExprKind::VarRef(n.string("name")?),
        "intLit" => {
            let node = n.field("value")?;
            ExprKind::IntLit(
                node.value
                    .as_i64()
                    .ok_or_else(|| SchemaError::new(&node.path, "expected an integer"))?,
            )
        }
        "boolLit" => {
            let node = n.field("value")?;
            ExprKind::BoolLit(
                node.value
                    .as_bool()
                    .ok_or_else(|| SchemaError::new(&node.path, "expected a boolean"))?,
            )
        }
        "call" => ExprKind::Call {
            name: n.string("name")?,
            args: n.array("args")?.iter().map(load_expr).collect::<Result<_, _>>()?,
        },
        other => {
            return Err(SchemaError::new(
                &kind_node.path,
                format!("unknown expression kind `{other}`"),
            ))
        }
    };
    Ok(Expr { kind, pos: n.pos()? })
}
