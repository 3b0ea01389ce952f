class FcaPipelineError(Exception):
    """Raiz de todos os erros do pipeline (medidas → propriedades → lattice → clusters)."""


class DomainError(FcaPipelineError, ValueError):
    """Valor fora do domínio matemático (tabela inviável, base vazia, confiança indefinida)."""


class InputError(FcaPipelineError, ValueError):
    """Entrada inválida fornecida pelo usuário (nomes desconhecidos, arquivos malformados)."""


class MeasureUndefinedError(DomainError):
    """A medida não está definida nesta tabela (divisão por zero, ln de não-positivo, ...)."""


class InsufficientDomainError(DomainError):
    """Um verificador de propriedade não encontrou amostras definidas suficientes para decidir."""


class CatalogError(InputError):
    pass


class CxtFormatError(InputError):
    pass


class ExpressionSyntaxError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownIdentifierError(InputError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown identifier '{name}' at position {position}")
        self.name = name
        self.position = position


class ConfigError(FcaPipelineError, ValueError):
    pass
