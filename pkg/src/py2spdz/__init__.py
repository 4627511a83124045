"""py2spdz: a rule-based transpiler from a small Python subset to
data-oblivious MP-SPDZ programs.

The pipeline has three stages: refactor the input into a canonical,
branch-free-on-secrets form; map names and types onto the MP-SPDZ
surface; then verify the result under a bit-exact fixed-point simulator
with trace auditing, repairing failures in a bounded feedback loop.
"""

__version__ = "0.1.0"
