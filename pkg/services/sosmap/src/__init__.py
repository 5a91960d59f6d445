"""Sum-of-squares map, objective, derivatives and Gram matrices."""

from services.sosmap.src.sosmap import (
    ObjectiveContext,
    distance,
    gradient,
    gram_rank,
    hessian,
    hessian_vector_product,
    objective,
    objective_and_gradient,
    residual,
    sigma,
    tau_gram,
)

__all__ = [
    "ObjectiveContext",
    "distance",
    "gradient",
    "gram_rank",
    "hessian",
    "hessian_vector_product",
    "objective",
    "objective_and_gradient",
    "residual",
    "sigma",
    "tau_gram",
]
