"""Logic synthesis and crossbar mapping for MAGIC NOR stateful logic."""

from .pipeline import CompileResult, FlowConfig, compile_aig, compile_luts, synthesize

__all__ = ["CompileResult", "FlowConfig", "compile_aig", "compile_luts", "synthesize"]
__version__ = "0.1.0"
