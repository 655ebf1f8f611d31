"""Monte Carlo laboratory for large faces of random laminations and
self-similar fragmentations."""

from ._lamina import (  # noqa: F401
    ConfigError,
    NumericalError,
    __version__,
    bessel_j1,
    count_large,
    dislocation_records,
    gamma_fn,
    laplace_exponent_brownian,
    longest_chord,
    longest_chord_cdf_brownian,
    sample_excursion,
    sample_stable_jumps,
    simulate_fragmentation,
    stable_largest_jump_cdf,
    stable_t1_moment_target,
)
