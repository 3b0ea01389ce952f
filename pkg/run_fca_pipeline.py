import argparse
import dataclasses
import os
import sys
from pathlib import Path

# Adiciona o diretório raiz do projeto ao Python path
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)

from config.settings import Config, PipelineConfig
from src.clustering.hierarchical import ahc_ward, cut_dendrogram, write_dendrogram_csv
from src.clustering.kmeans import kmeans
from src.clustering.partitions import (
    PartitionComparison,
    Partition,
    compare_partitions,
    load_reference_clusters,
    read_partition_csv,
    write_partition_csv,
)
from src.contingency.rules import is_valid_rule, parse_rule, read_transactions, table_from_transactions
from src.fca.concept_lattice import ConceptLattice, enumerate_concepts
from src.fca.cxt_format import read_cxt, write_cxt
from src.fca.dot_export import write_dot
from src.fca.formal_context import FormalContext, context_from_matrix
from src.measures.catalog import eval_measure, load_catalog
from src.properties.property_engine import PropertyEngine, PropertyMatrix, read_matrix_csv
from src.utils.errors import FcaPipelineError, InputError, MeasureUndefinedError
from src.utils.file_output import render_csv, write_text_atomic
from src.validation.cluster_validator import Verdict, assign_floating, split_suggestion, validate_partition
from src.validation.report import ValidationReport

MATRIX_FILE = "property_matrix.csv"
EVIDENCE_FILE = "property_evidence.txt"
CONTEXT_FILE = "context.cxt"
DOT_FILE = "lattice.dot"
AHC_FILE = "ahc_partition.csv"
KMEANS_FILE = "kmeans_partition.csv"
DENDROGRAM_FILE = "dendrogram.csv"
DISAGREEMENT_FILE = "disagreement.txt"
REPORT_TEXT_FILE = "validation_report.txt"
REPORT_CSV_FILE = "validation_report.csv"
RULE_FILE = "rule_measures.csv"


def cmd_matrix(config: PipelineConfig) -> PropertyMatrix:
    """Etapa 1: catálogo → matriz medidas × propriedades (+ relatório de evidências)."""
    print(f"📋 Carregando catálogo: {config.catalog_path}")
    catalog = load_catalog(config.catalog_path)
    matrix = PropertyEngine(config.grid).build_matrix(catalog)
    # os dois textos são montados antes de qualquer escrita
    matrix_text, evidence_text = matrix.to_csv_text(), matrix.evidence_report()
    matrix_path = write_text_atomic(config.output_dir / MATRIX_FILE, matrix_text)
    evidence_path = write_text_atomic(config.output_dir / EVIDENCE_FILE, evidence_text)
    print(f"💾 Matriz salva em {matrix_path}")
    print(f"💾 Evidências salvas em {evidence_path}")
    return matrix


def cmd_context(config: PipelineConfig, matrix_path: Path | None = None) -> FormalContext:
    """Etapa 2: matriz → contexto formal (P14.2 e P14.3 descartadas) em formato CXT."""
    source = matrix_path or config.output_dir / MATRIX_FILE
    ctx = context_from_matrix(read_matrix_csv(source))
    target = write_cxt(ctx, config.output_dir / CONTEXT_FILE)
    print(f"📊 Contexto: {len(ctx.objects)} objetos × {len(ctx.attributes)} atributos")
    print(f"💾 Contexto salvo em {target}")
    return ctx


def _read_highlight(path: Path) -> list[str]:
    if not path.is_file():
        raise InputError(f"highlight file not found: {path}")
    return [line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def cmd_lattice(config: PipelineConfig, cxt_path: Path | None = None, highlight: Path | None = None) -> ConceptLattice:
    """Etapa 3: contexto → lattice de conceitos + diagrama de Hasse em DOT."""
    ctx = read_cxt(cxt_path or config.output_dir / CONTEXT_FILE)
    lattice = enumerate_concepts(ctx)
    names = _read_highlight(highlight) if highlight else []
    target = write_dot(lattice, config.output_dir / DOT_FILE, highlight=names)

    top, bottom = lattice.concepts[lattice.top], lattice.concepts[lattice.bottom]
    label = "conceito" if len(lattice) == 1 else "conceitos"
    print(f"📊 {len(lattice)} {label}, {len(lattice.covers)} arestas de cobertura, altura {lattice.height()}")
    print(f"   -> topo: intensão {{{', '.join(top.attributes(ctx))}}}")
    print(f"   -> fundo: extensão {{{', '.join(bottom.objects(ctx))}}}")
    print(f"💾 Diagrama salvo em {target}")
    return lattice


def _write_disagreement(config: PipelineConfig, comparison: PartitionComparison) -> Path:
    text = "".join(f"{name}\n" for name in comparison.disagreement)
    return write_text_atomic(config.output_dir / DISAGREEMENT_FILE, text)


def cmd_cluster(
    config: PipelineConfig, matrix_path: Path | None = None, fixtures: bool = False
) -> tuple[Partition, Partition, PartitionComparison]:
    """Etapa 4: AHC (Ward, corte em k) e K-means sobre as linhas da matriz; compara as duas partições."""
    if fixtures:
        print(f"📋 Usando partições de referência: {config.reference_clusters_path}")
        reference = load_reference_clusters(config.reference_clusters_path)
        ahc = reference.partition("ahc")
        km = reference.partition("kmeans", objects=ahc.objects)
    else:
        matrix = read_matrix_csv(matrix_path or config.output_dir / MATRIX_FILE)
        if not 1 <= config.k <= len(matrix):
            raise InputError(f"k = {config.k} must lie in [1, {len(matrix)}] (number of measures)")
        rows = [list(row) for row in matrix.rows]
        print(f"🚀 Agrupando {len(rows)} medidas em {config.k} grupos...")
        dendrogram = ahc_ward(rows)
        ahc = cut_dendrogram(dendrogram, config.k, matrix.measures)
        km = kmeans(rows, config.k, seed=config.seed, max_iter=config.kmeans_max_iter, objects=matrix.measures)
        print(f"💾 Dendrograma salvo em {write_dendrogram_csv(dendrogram, config.output_dir / DENDROGRAM_FILE)}")

    comparison = compare_partitions(ahc, km)
    write_partition_csv(ahc, config.output_dir / AHC_FILE)
    write_partition_csv(km, config.output_dir / KMEANS_FILE)
    _write_disagreement(config, comparison)
    print(f"   -> AHC: {ahc.k} grupos | K-means: {km.k} grupos")
    print(f"📊 {len(comparison.disagreement)} medidas em grupos diferentes: {', '.join(comparison.disagreement) or '-'}")
    print(f"💾 Partições salvas em {config.output_dir}")
    return ahc, km, comparison


def _validation_report(
    config: PipelineConfig, ctx: FormalContext, lattice: ConceptLattice, partition: Partition
) -> ValidationReport:
    unknown = sorted(set(partition.objects) - set(ctx.objects))
    if unknown:
        raise InputError(f"partition names not in the context: {', '.join(unknown)}")
    floating = [name for name in ctx.objects if name not in partition.objects]

    validations = validate_partition(ctx, lattice, partition, config.thresholds)
    splits = {
        v.cluster_id: split_suggestion(ctx, lattice, v.members)
        for v in validations if v.verdict is not Verdict.VALIDATED
    }
    assignments = [assign_floating(ctx, lattice, name, partition, config.tau) for name in floating]
    return ValidationReport(validations=tuple(validations), assignments=tuple(assignments), splits=splits)


def cmd_validate(
    config: PipelineConfig,
    cxt_path: Path | None = None,
    partition_path: Path | None = None,
    partition: Partition | None = None,
) -> ValidationReport:
    """Etapa 5: valida cada grupo pelo lattice; objetos fora da partição são tratados como flutuantes."""
    ctx = read_cxt(cxt_path or config.output_dir / CONTEXT_FILE)
    lattice = enumerate_concepts(ctx)
    if partition is None:
        partition = read_partition_csv(partition_path or config.output_dir / AHC_FILE)
    report = _validation_report(config, ctx, lattice, partition)
    text_path, csv_path = report.write(config.output_dir / REPORT_TEXT_FILE, config.output_dir / REPORT_CSV_FILE)

    counts = report.counts()
    print(
        f"📊 Grupos: {counts[Verdict.VALIDATED]} validados, {counts[Verdict.HARDLY_VALIDATED]} dificilmente validados, "
        f"{counts[Verdict.QUESTIONABLE]} questionáveis"
    )
    for assignment in report.assignments:
        target = "sem decisão" if assignment.unresolved else report.name_of(assignment.assigned)
        print(f"   -> {assignment.measure}: {target}")
    print(f"💾 Relatório salvo em {text_path} e {csv_path}")
    return report


def cmd_rule(
    config: PipelineConfig, transactions_path: Path, rule_text: str, minsupp: float = 0.0, minconf: float = 0.0
) -> list[tuple[str, float | None]]:
    """Conta a regra nas transações e avalia todas as medidas computáveis na tabela obtida."""
    data = read_transactions(transactions_path)
    query = parse_rule(rule_text, minsupp, minconf)
    table = table_from_transactions(data, query)
    assessment = is_valid_rule(table, query)
    print(f"📊 {len(data.objects)} registros, {len(data.universe)} atributos")
    print(f"   -> n={table.n:g}, n_x={table.n_x:g}, n_y={table.n_y:g}, n_xy={table.n_xy:g}")
    status = "válida" if assessment.valid else "inválida"
    print(f"   -> suporte={assessment.support:.4f}, confiança={assessment.confidence:.4f}: regra {status}")

    catalog = load_catalog(config.catalog_path)
    values: list[tuple[str, float | None]] = []
    for m in catalog.computable():
        try:
            values.append((m.name, eval_measure(m, table)))
        except MeasureUndefinedError:
            values.append((m.name, None))
    rows = [(name, "" if value is None else f"{value:.12g}") for name, value in values]
    target = write_text_atomic(config.output_dir / RULE_FILE, render_csv(("measure", "value"), rows))
    undefined = sum(1 for _, value in values if value is None)
    if undefined:
        print(f"⚠️ {undefined} medidas indefinidas nesta tabela")
    print(f"💾 Valores das medidas salvos em {target}")
    return values


def cmd_pipeline(config: PipelineConfig, fixtures: bool = False) -> ValidationReport:
    """Todas as etapas: matriz → contexto → lattice → clusters → validação."""
    print("🚀 Iniciando pipeline FCA de medidas de interesse")
    print("=" * 60)
    cmd_matrix(config)
    cmd_context(config)
    cmd_lattice(config)
    ahc, _, comparison = cmd_cluster(config, fixtures=fixtures)

    partition = ahc
    if config.floating_policy == "exclude" and comparison.disagreement:
        partition = ahc.without(comparison.disagreement)
        print(f"⚠️ {len(comparison.disagreement)} medidas flutuantes serão atribuídas pelo lattice")
    report = cmd_validate(config, partition=partition)
    print("=" * 60)
    print("🎉 Pipeline concluído!")
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="run_fca_pipeline.py",
        description="Validação de grupos de medidas de interesse por Análise Formal de Conceitos",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="arquivo chave=valor de configuração")
    common.add_argument("--out", type=Path, help="diretório de saída")
    common.add_argument("--seed", type=int, help="semente do K-means")
    common.add_argument("--k", type=int, help="número de grupos")
    common.add_argument("--fixtures", action="store_true", help="usa as partições de referência empacotadas")

    sub = parser.add_subparsers(dest="command", required=True)
    matrix = sub.add_parser("matrix", parents=[common], help="catálogo → matriz de propriedades")
    matrix.add_argument("--catalog", type=Path, help="catálogo de medidas")

    context = sub.add_parser("context", parents=[common], help="matriz → contexto CXT")
    context.add_argument("--matrix", type=Path)

    lattice = sub.add_parser("lattice", parents=[common], help="contexto → lattice + DOT")
    lattice.add_argument("--cxt", type=Path)
    lattice.add_argument("--highlight", type=Path, help="arquivo com nomes de objetos a destacar, um por linha")

    cluster = sub.add_parser("cluster", parents=[common], help="matriz → partições AHC e K-means")
    cluster.add_argument("--matrix", type=Path)

    validate = sub.add_parser("validate", parents=[common], help="contexto + partição → relatório de validação")
    validate.add_argument("--cxt", type=Path)
    validate.add_argument("--partition", type=Path)

    rule = sub.add_parser("rule", parents=[common], help="transações + regra → tabela de contingência e valores das medidas")
    rule.add_argument("--transactions", type=Path, required=True, help="um registro por linha, atributos separados por espaço")
    rule.add_argument("--rule", required=True, help="regra no formato 'a b => c'")
    rule.add_argument("--minsupp", type=float, default=0.0)
    rule.add_argument("--minconf", type=float, default=0.0)
    rule.add_argument("--catalog", type=Path, help="catálogo de medidas")

    pipeline = sub.add_parser("pipeline", parents=[common], help="todas as etapas")
    pipeline.add_argument("--catalog", type=Path, help="catálogo de medidas")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        Config.validate()
        config = PipelineConfig.load(args.config).with_overrides(k=args.k, seed=args.seed, output_dir=args.out)
        if getattr(args, "catalog", None):
            config = dataclasses.replace(config, catalog_path=args.catalog)
    except ValueError as e:
        print(f"❌ Erro de configuração: {e}")
        return 1

    try:
        if args.command == "matrix":
            cmd_matrix(config)
        elif args.command == "context":
            cmd_context(config, args.matrix)
        elif args.command == "lattice":
            cmd_lattice(config, args.cxt, args.highlight)
        elif args.command == "cluster":
            cmd_cluster(config, args.matrix, fixtures=args.fixtures)
        elif args.command == "validate":
            cmd_validate(config, args.cxt, args.partition)
        elif args.command == "rule":
            cmd_rule(config, args.transactions, args.rule, args.minsupp, args.minconf)
        elif args.command == "pipeline":
            cmd_pipeline(config, fixtures=args.fixtures)
    except (FcaPipelineError, ValueError, OSError) as e:
        print(f"❌ Erro: {e}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
