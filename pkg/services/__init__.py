"""
Services package: the language core, compiler, simulator and algorithm builders.
"""
