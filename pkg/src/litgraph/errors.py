"""Exception hierarchy shared across the package."""


class LitgraphError(Exception):
    """Base class for all litgraph errors."""


class LexiconParseError(LitgraphError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DuplicateConceptIdError(LitgraphError):
    pass


class EmptyLexiconError(LitgraphError):
    pass


class CorpusFormatError(LitgraphError):
    pass


class ConceptNotFoundError(LitgraphError):
    def __init__(self, concept_ids):
        ids = sorted(concept_ids) if not isinstance(concept_ids, str) else [concept_ids]
        super().__init__(f"unknown concept(s): {', '.join(ids)}")
        self.concept_ids = tuple(ids)


class RelationNotFoundError(LitgraphError):
    pass


class InvalidTripleError(LitgraphError):
    pass


class DegenerateQueryError(LitgraphError):
    pass


class InsufficientDataError(LitgraphError):
    pass


class ConfigError(LitgraphError):
    pass
