"""Word-level READ/WRITE policies, latency metrics and masks for simultaneous MT."""

from .alignment_eval import (AlignmentSet, QualityReport, aligned_read_proportion,
                             corpus_quality, parse_pharaoh)
from .errors import *  # noqa: F401,F403
from .harness import (CorpusRecord, EvalConfig, StepTrace, evaluate_corpus, evaluate_records,
                      format_result, render_trace, simulate)
from .latency import (ALParams, WordDelays, al_details, average_lagging, latency_report,
                      project_word_delays, word_average_lagging)
from .lm_sync import (DualSegmentation, SyncSchedule, align_dual, lm_attend_limit,
                      lm_horizon_mask, sync_schedule)
from .mask import AttentionMask, causal_mask, cross_mask, intra_word_mask
from .policy import (ActionTrace, ConversionResult, Schedule, TransportMatrix, ablation_policy,
                     actions_to_schedule, itst_required_counts, itst_word_policy,
                     schedule_to_actions, target_word_end, to_word_policy, waitk_token,
                     waitk_word, word_read_refine)
from .specs import parse_policy
from .tokenization import (MARKER, Token, TokenizedSentence, WordSpan, detokenize, parse_marked,
                           word_index_of, word_spans)

__version__ = "0.1.0"
