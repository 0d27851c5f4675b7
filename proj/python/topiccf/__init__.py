"""Topic-model assisted collaborative filtering."""

from ._topiccf import (
    ALGORITHMS,
    ConfigError,
    Error,
    IoError,
    ParseError,
    Persona,
    PersonaTable,
    RangeError,
    RatingDataset,
    Recommender,
    TopicModel,
    build_personas,
    cmd_evaluate,
    cmd_personas,
    cmd_split,
    cmd_train,
    evaluate,
    f_measure,
    load_ratings,
    make_recommender,
    parse_ratings,
    personas_from,
    similarity,
    split_train_test,
    summarize,
    symmetric_kl,
    tokenize,
    train_topics,
)

__all__ = [name for name in dir() if not name.startswith("_")]
