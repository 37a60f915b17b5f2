"""Monte-Carlo random-access experiments"""
