"""Citation metrics that price productivity: CAP and friends.

CAP counts a researcher's recent publications whose citations, less the
author count, meet or exceed the size of the publication set itself, so each
additional publication raises the bar for all of them. The package computes
CAP, its pruned sensitivity variants, and the companion metrics (CP,
h-index, fractional h, mean and total citations) over windowed publication
corpora, and ships the analyses built on them: rankings, temporal
trajectories, factor and metric correlations, and rank-citation geometry.
"""

__version__ = "0.1.0"

from .model import (
    AuthorProfile,
    Corpus,
    CorpusStats,
    DocType,
    FieldStats,
    Publication,
    ValidationReport,
    corpus_stats,
    validate_corpus,
)
from .windows import (
    DEFAULT_DISCARD_TYPES,
    WindowItem,
    WindowSpec,
    WindowedRecord,
    build_window,
    lifetime_window,
    standard_window,
)
from .metrics import (
    CapVariants,
    MetricsRow,
    RankCitationProfile,
    cap,
    cap_variants,
    compute_metrics,
    cp,
    h_frac,
    h_index,
    mean_citations,
    metric_value,
    rank_citation_profile,
    total_citations,
)
from .analysis import (
    CorrelationCell,
    CorrelationMatrix,
    FactorRow,
    RankingEntry,
    RecordSetter,
    TrajectoryPoint,
    YearEvaluation,
    cap_trajectory,
    compute_factors,
    evaluate_year,
    factor_correlations,
    inclusion_counts,
    metric_correlations,
    pearson,
    rank_by,
    record_setters,
    sensitivity_correlations,
    top_cohorts,
    trajectory,
)
from .corpusio import (
    CorpusFormatError,
    corpus_from_records,
    parse_corpus,
    read_metric_table,
    write_corpus,
)
from .synth import SynthConfig, strip_spam, synth_corpus
