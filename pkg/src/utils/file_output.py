import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence


def write_text_atomic(path: str | Path, text: str) -> Path:
    """
    Grava o arquivo num temporário do mesmo diretório e renomeia no final.
    Uma execução que falha no meio nunca deixa saída parcial no destino.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return target


def render_csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def write_csv_atomic(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    return write_text_atomic(path, render_csv(header, rows))


def read_csv_rows(path: str | Path) -> tuple[list[str], list[list[str]]]:
    """Lê um CSV (cabeçalho + linhas). Arquivo vazio devolve cabeçalho vazio."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        return [], []
    return rows[0], [row for row in rows[1:] if row]
