"""Report models, settings and renderers"""
