//! `qlw`: batch front end for the quantum-logic workbench.
//!
//! Exit status:
//!
//! * 0: the queried property holds or the derivation is accepted.
//! * 1: a countermodel or rejection was printed.
//! * 2: usage, I/O or format error.

mod commands;
mod input;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{Format, Status};

#[derive(Parser, Debug)]
#[command(name = "qlw", version, about = "Finite-model and proof-checking workbench for quantum logic")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, global = true, default_value = "plain")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalog entries or print one in its file format.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Classify a structure and list the axioms it violates.
    Validate {
        /// Structure file or `catalog:NAME`.
        source: String,
        /// Exit 1 unless the structure belongs to this class.
        #[arg(long)]
        class: Option<String>,
    },
    /// Report the order-theoretic and logical properties of a source.
    Props { source: String },
    /// Value of a formula under an assignment.
    Eval {
        source: String,
        #[arg(allow_hyphen_values = true)]
        formula: String,
        #[arg(long, default_value = "OL")]
        dialect: String,
        /// `literal=element`, repeatable.
        #[arg(long = "assign")]
        assign: Vec<String>,
    },
    /// Logical truth over a list of structures.
    Valid {
        #[arg(allow_hyphen_values = true)]
        formula: String,
        #[command(flatten)]
        sem: SemanticsArgs,
    },
    /// Semantic consequence over a list of structures.
    Conseq {
        #[arg(allow_hyphen_values = true)]
        conclusion: String,
        #[command(flatten)]
        sem: SemanticsArgs,
        #[arg(long, conflicts_with = "quasi")]
        weak: bool,
        #[arg(long)]
        quasi: bool,
    },
    /// Search a countermodel to a consequence, or a (quasi-)model of the
    /// premises when no conclusion is given.
    Countermodel {
        #[arg(allow_hyphen_values = true)]
        conclusion: Option<String>,
        #[command(flatten)]
        sem: SemanticsArgs,
        /// Without a conclusion: find a model (`full`) or a quasi-model (`quasi`).
        #[arg(long, value_parser = ["full", "quasi"], default_value = "quasi")]
        model: String,
    },
    /// Evaluate a first-order formula in a finite model file.
    FoEval {
        model: String,
        #[arg(allow_hyphen_values = true)]
        formula: String,
        /// `variable=individual`, repeatable.
        #[arg(long = "var")]
        vars: Vec<String>,
    },
    /// Kripke frames and realizations.
    #[command(subcommand)]
    Kripke(KripkeCmd),
    /// Translate an orthologic formula into the Brouwerian modal language.
    Translate {
        #[arg(allow_hyphen_values = true)]
        formula: String,
        #[arg(long)]
        modal: bool,
        #[arg(long, default_value = "OL")]
        dialect: String,
    },
    /// MacNeille completion of a structure, with the embedding.
    Complete {
        source: String,
        /// Carry the ∼ complement through the completion.
        #[arg(long)]
        bz: bool,
    },
    /// QMV tables.
    #[command(subcommand)]
    Qmv(QmvCmd),
    /// Partial-sum tables and consequence.
    #[command(subcommand)]
    Paql(PaqlCmd),
    /// Orthopair realizations over frame files.
    #[command(subcommand)]
    Bz3(Bz3Cmd),
    /// Proof kernel verbs.
    #[command(subcommand)]
    Proof(ProofCmd),
    /// Replay an acceptance criterion by number, id, or `all`.
    Reproduce { criterion: String },
}

#[derive(Args, Debug)]
struct SemanticsArgs {
    /// Premise formula, repeatable.
    #[arg(long = "premise", allow_hyphen_values = true)]
    premises: Vec<String>,
    #[arg(long, default_value = "OL")]
    dialect: String,
    /// Comma-separated sources, `class:NAME` or `standard`. Defaults to the
    /// catalog structures characterizing the dialect.
    #[arg(long, value_delimiter = ',')]
    structures: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum CatalogCmd {
    List,
    Show { name: String },
}

#[derive(Subcommand, Debug)]
enum KripkeCmd {
    /// Worlds forcing a formula.
    Eval {
        frame: String,
        #[arg(allow_hyphen_values = true)]
        formula: String,
        #[arg(long, default_value = "OL")]
        dialect: String,
    },
    /// Properties of a realization.
    Check { frame: String },
    /// The canonical realization of a structure.
    Canonical {
        source: String,
        #[arg(long = "assign")]
        assign: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum QmvCmd {
    Validate { source: String },
    /// Look for a term t with t(x, y) = 1 exactly when x ⪯ y.
    SearchConditional {
        source: String,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
    },
    /// Convert a QMV table to its partial sum or a partial table to its QMV.
    Transform { source: String },
}

#[derive(Subcommand, Debug)]
enum PaqlCmd {
    Validate { source: String },
    Conseq {
        #[arg(allow_hyphen_values = true)]
        conclusion: String,
        #[arg(long = "premise", allow_hyphen_values = true)]
        premises: Vec<String>,
        #[arg(long, default_value = "UPaQL")]
        dialect: String,
        /// Comma-separated table sources. Defaults to the tables of the
        /// class characterizing the dialect.
        #[arg(long, value_delimiter = ',')]
        tables: Vec<String>,
        #[arg(long, value_parser = ["per-formula", "per-occurrence"], default_value = "per-formula")]
        mode: String,
    },
}

#[derive(Subcommand, Debug)]
enum Bz3Cmd {
    /// Value of a BZL formula; literals are `p=POS/NEG` with comma-separated worlds.
    Eval {
        frame: String,
        #[arg(allow_hyphen_values = true)]
        formula: String,
        #[arg(long = "assign")]
        assign: Vec<String>,
    },
    /// Check the pair laws and BZ³ axioms on the orthopairs of a frame.
    CheckPairLaws { frame: String },
}

#[derive(Subcommand, Debug)]
enum ProofCmd {
    /// Check a derivation file or `sample:NAME`.
    Check {
        derivation: String,
        #[arg(long)]
        calculus: Option<String>,
    },
    /// Search a derivation of `[premises] |- conclusion`.
    Search {
        #[arg(allow_hyphen_values = true)]
        goal: String,
        #[arg(long)]
        calculus: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Check every step against the structures of the calculus.
    Harness {
        derivation: String,
        #[arg(long)]
        calculus: Option<String>,
    },
    /// Replace derived rules by primitive steps.
    Expand {
        derivation: String,
        #[arg(long)]
        calculus: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            match report.status {
                Status::Holds => ExitCode::SUCCESS,
                Status::Fails => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
