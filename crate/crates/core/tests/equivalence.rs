//! Lens-composed games against the direct engine.

use std::sync::Arc;

use cakecut::cake::{Fraction, PlayerId};
use cakecut::engine::{deviate, equilibrium_profile, play, GameConfig, Rule, StrategyProfile};
use cakecut::equilibrium::{Grid, ValueTable};
use cakecut::open_game::{choose_bigger, compose_game, count_queries, play_composed, Chooser};

fn choosers(config: &GameConfig) -> Vec<Chooser> {
    match config.rule {
        Rule::Vanilla => vec![choose_bigger(); config.n - 1],
        Rule::BiggestPlayer => {
            let table = Arc::new(ValueTable::build(config.n, Grid::new(60).unwrap()).unwrap());
            vec![table.chooser(); config.n - 1]
        }
    }
}

fn assert_same(config: &GameConfig, profile: &StrategyProfile, choosers: &[Chooser]) {
    let game = compose_game(config, profile, choosers).unwrap();
    let composed = play_composed(config, &game).unwrap();
    let direct = play(config, profile).unwrap();
    assert_eq!(composed, direct, "n = {}, rule = {}", config.n, config.rule);
    assert_eq!(count_queries(&composed.1.events).unwrap(), direct.1.queries);
}

#[test]
fn first_cut_grid_both_rules() {
    for rule in [Rule::Vanilla, Rule::BiggestPlayer] {
        for n in 2..=5 {
            let config = GameConfig::unit(n, rule).unwrap();
            let eq = equilibrium_profile(&config);
            let cs = choosers(&config);
            for alpha in Grid::new(60).unwrap().points() {
                assert_same(&config, &deviate(&eq, PlayerId(1), alpha).unwrap(), &cs);
            }
        }
    }
}

#[test]
fn vanilla_later_cutters_deviate() {
    for n in 3..=5 {
        let config = GameConfig::unit(n, Rule::Vanilla).unwrap();
        let eq = equilibrium_profile(&config);
        let cs = choosers(&config);
        for cutter in 2..n {
            for alpha in Grid::new(12).unwrap().points() {
                assert_same(&config, &deviate(&eq, PlayerId(cutter), alpha).unwrap(), &cs);
            }
        }
    }
}

#[test]
fn scaled_cake() {
    for rule in [Rule::Vanilla, Rule::BiggestPlayer] {
        let cake = cakecut::cake::Cake::new(Fraction::new(7, 3)).unwrap();
        let config = GameConfig::new(4, cake, rule).unwrap();
        assert_same(&config, &equilibrium_profile(&config), &choosers(&config));
    }
}
