"""Single- and multi-user reconstruction"""
