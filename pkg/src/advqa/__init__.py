"""advqa: multilingual adversarial distractors and G-XLT evaluation for extractive QA."""

__version__ = "0.1.0"

from .annotation import (
    AnnotatedQuestion,
    EntitySpan,
    Token,
    descendants,
    read_annotations,
    write_annotations,
)
from .attacks import (
    AdversarialStatement,
    AttackConfig,
    AttackKind,
    StatementLanguagePolicy,
    attack_corpus,
    choose_statement_language,
    insert,
    instantiate,
    resolve_answer_type,
)
from .corpus import (
    AnswerSpan,
    Corpus,
    LANGUAGES,
    QaInstance,
    corpus_from_instances,
    read_corpus,
    split_sentences,
    write_corpus,
)
from .defense import build_defense_set, build_defense_union
from .entity_pool import EntityPool, build_pool, read_pool, sample, synthesize, write_pool
from .evaluation import (
    AttackImpact,
    GxltReport,
    attack_impact,
    f1_em,
    gxlt,
    normalize,
)
from .patterns import (
    MarkedEntity,
    QuestionPattern,
    find_focus,
    mark_entities,
    mine_pattern,
    pattern_stats,
)
from .statements import PLACEHOLDER, StatementTemplate, convert
from .translation import (
    AlignedTranslation,
    DictionaryTranslator,
    HttpTranslator,
    IdentityTranslator,
    align_answer,
    build_mt_squad,
    translate_statement,
)
