use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::Corpus;

pub const ARTICLES_HEADER: [&str; 6] = ["id", "pub_year", "field", "region", "journal_id", "author_ids"];
pub const EDGES_HEADER: [&str; 2] = ["citing_id", "cited_id"];

/// Writes the articles table in index order.
pub fn write_articles<W: Write>(corpus: &Corpus, out: W) -> io::Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{}", ARTICLES_HEADER.join("\t"))?;
    for a in corpus.articles() {
        write!(
            out,
            "{}\t{}\t{}\t{}\t{}\t",
            a.id(),
            a.pub_year(),
            a.field(),
            a.region(),
            a.journal_id()
        )?;
        for (i, author) in a.author_ids().enumerate() {
            if i > 0 {
                out.write_all(b";")?;
            }
            out.write_all(author.as_bytes())?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Writes the edge table ordered by citing then cited index.
pub fn write_edges<W: Write>(corpus: &Corpus, out: W) -> io::Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{}", EDGES_HEADER.join("\t"))?;
    for (citing, cited, _) in corpus.edges() {
        writeln!(out, "{}\t{}", corpus.id(citing), corpus.id(cited))?;
    }
    out.flush()
}

/// Writes `articles.tsv` and `edges.tsv` under `dir`.
pub fn write_corpus_files(corpus: &Corpus, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    write_articles(corpus, fs::File::create(dir.join("articles.tsv"))?)?;
    write_edges(corpus, fs::File::create(dir.join("edges.tsv"))?)
}
