#pragma once

// Generated by tests/oracles/derive_values.py (mpmath, 100 digits).
// Do not edit by hand.

namespace oracle {

inline const char* const kScalarsGeneric[] = {"0.46", "0.694846922834953429459185222411767417589784244197001038529808", "0.16", "-0.08", "0.0", "0.0025"};
inline const char* const kKAtDivergingPoint[] = {"-0.247842712474619009760337744841939615713934375075389614635336", "3.05685424949238019520675489683879231427868750150779229270672", "2.4"};
inline const char* const kRhsAtConvergingPoint[] = {"0.1", "0.0", "-0.317842712474619009760337744841939615713934375075389614635336", "0.0", "0.0247842712474619009760337744841939615713934375075389614635336", "0.0"};
inline const char* const kFourthAccelerated[] = {"0.0", "0.545685424949238019520675489683879231427868750150779229270672", "0.0", "0.0"};
inline const char* const kFixedPointEta = "-0.685685424949238019520675489683879231427868750150779229270672";
inline const char* const kFixedPointSpectrumRe[] = {"5.17557267794262570121438382442694513076909456910514232571795", "2.0515629712645118807330035969211724620676723973477861315651e-101", "8.32224038367631698512865443763574551179715764996404213380908e-102", "7.94435959432836598429290618614806749679396137648312068412315e-102", "0.0", "-5.17557267794262570121438382442694513076909456910514232571795"};
inline const char* const kFixedPointSpectrumIm[] = {"0.0", "-8.54402166381148879193428104215667482801456791712425487741959e-102", "-1.84053325735854914335367667514094941527703381085682419192162", "1.84053325735854914335367667514094941527703381085682419192162", "0.0", "1.44436810508820485460500878141054711826681755782593216993939e-102"};
inline const char* const kUniformSpectrumRe[] = {"4.75682846001088426686999988224190366117188836985526965207601", "0.0", "0.0", "0.0", "-1.59615694137690143497701916986745539985897057315426773426085e-101", "-4.75682846001088426686999988224190366117188836985526965207601"};
inline const char* const kUniformSpectrumIm[] = {"0.0", "1.68179283050742908606225095246642979008006852471356902162645", "0.0", "-1.68179283050742908606225095246642979008006852471356902162645", "0.0", "0.0"};
inline const char* const kJacobianDivergingPoint[] = {"0.0", "1.0", "0.0", "0.0", "0.0", "0.0", "0.0", "0.0", "1.0", "0.0", "0.0", "0.0", "-0.00421356237309504880168872420969807856967187537694807317667974", "-9.87842712474619009760337744841939615713934375075389614635336", "4.0", "6.0", "-3.0", "0.0", "0.0", "0.0", "0.0", "0.0", "1.0", "0.0", "-4.89525973595304241419595161465069350385303218838205849123343", "6.02568542494923801952067548968387923142786875015077922927067", "-3.2", "3.71370849898476039041350979367758462855737500301558458541344", "2.4", "2.0", "-0.197705627484771405856202646905163769428360625045233768781202", "-0.355685424949238019520675489683879231427868750150779229270672", "0.247842712474619009760337744841939615713934375075389614635336", "0.495685424949238019520675489683879231427868750150779229270672", "3.05685424949238019520675489683879231427868750150779229270672", "4.8"};
inline const char* const kJacobianUnitUniform32 = "-16.0";
inline const char* const kBlowupAfter1em3[] = {"0.50000000000011142141640120845386735620794416714209466972913", "0.000000000445685785932868188385667756822902139667890136639865334089156", "0.0000013370580797677567033548062140313022540769656036865142251557", "-0.100000445686354480541726778346568377993502994935385988488998", "-0.000891374568027134935236099593667625290058516358056733812606676", "-0.00000198636276139569041596952118102319325034094561762571794100159"};
inline const char* const kConvergeAt0p05[] = {"0.504992985568067950714305868472089723706262847466473066985284", "0.0995710654745378920337384694172799268472058061350184317864855", "-0.0178112711536715475573958101791165503453405120928503227772392", "0.0000324933620352037245601249667682636667451825071946852774459239", "0.0013312846116183136662956072735537219742385406259010600406379", "0.0000301376942806193911807301287335889003792801847173560451588399"};
inline const char* const kPhiSecondDerivative = "14.6293287105208943051281638805170540632430531457341892573091";
inline const char* const kGelfandConst = "-2.0";
inline const char* const kGelfandCubicLamM2p3B2 = "4.35905285710979962160713784574284689673237614645433724529962";
inline const char* const kRemainderResidue = "55.1247587415219710615515846113815633495756176902453543166641";
inline const char* const kBlowupTauDop853 = "0.78698";

}  // namespace oracle
